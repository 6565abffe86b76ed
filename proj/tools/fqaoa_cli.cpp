// Command-line front end: every pipeline writes its data files plus a
// manifest.json into the directory given by --out.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 1 anything else.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqaoa/fqaoa.hpp"

namespace fs = std::filesystem;
using namespace fqaoa;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Output {
  fs::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& text) {
    write_text_file((dir / name).string(), text);
    files.push_back(name);
  }
};

struct ModelArgs {
  std::string kind = "ss";
  int n = 3;
  double j1 = 1.0;
  double j2 = 0.0;
  double h = 0.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "Lattice: square | ss | triangular")->capture_default_str();
    cmd->add_option("--n", n, "Sites per side")->capture_default_str();
    cmd->add_option("--j1", j1, "Nearest-neighbour coupling")->capture_default_str();
    cmd->add_option("--j2", j2, "Diagonal coupling")->capture_default_str();
    cmd->add_option("--h", h, "Longitudinal field")->capture_default_str();
  }
  IsingModel model() const { return make_model(parse_lattice_kind(kind), n, j1, j2, h); }
  json to_json() const { return {{"kind", kind}, {"n", n}, {"j1", j1}, {"j2", j2}, {"h", h}}; }
};

struct AxesArgs {
  std::string h = "0:5.8:0.2";
  std::string j2 = "0:5.8:0.2";
  std::size_t h_points = 0;
  std::size_t j2_points = 0;
  std::size_t points = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--h", h, "Field axis: v | lo:hi:step | lo:hi with --h-points")->capture_default_str();
    cmd->add_option("--j2", j2, "J2 axis, same syntax")->capture_default_str();
    cmd->add_option("--h-points", h_points, "Evenly spaced points over the h range (endpoints included)");
    cmd->add_option("--j2-points", j2_points, "Evenly spaced points over the J2 range (endpoints included)");
    cmd->add_option("--points", points, "Default for --h-points and --j2-points");
  }
  std::vector<double> h_axis() const { return parse_axis(h, h_points ? h_points : points); }
  std::vector<double> j2_axis() const { return parse_axis(j2, j2_points ? j2_points : points); }
  json to_json() const {
    return {{"h", h}, {"j2", j2}, {"h_points", h_points}, {"j2_points", j2_points}, {"points", points}};
  }
};

struct GridArgs {
  std::size_t n_beta = 201;
  std::size_t n_gamma = 300;
  double gamma_factor = 0.55;

  void add(CLI::App* cmd) {
    cmd->add_option("--n-beta", n_beta, "Beta grid points over [-pi/2, pi/2]")->capture_default_str();
    cmd->add_option("--n-gamma", n_gamma, "Gamma grid points over [-f pi/iota, f pi/iota]")->capture_default_str();
    cmd->add_option("--gamma-factor", gamma_factor, "Gamma window factor f")->capture_default_str();
  }
  GridSpec spec() const {
    GridSpec s;
    s.n_beta = n_beta;
    s.n_gamma = n_gamma;
    s.gamma_factor = gamma_factor;
    if (n_beta == 0 || n_gamma == 0) throw UsageError("grid needs at least one point per axis");
    return s;
  }
  json to_json() const { return {{"n_beta", n_beta}, {"n_gamma", n_gamma}, {"gamma_factor", gamma_factor}}; }
};

Output prepare_output(const std::string& dir) {
  Output out{fs::path(dir), {}};
  fs::create_directories(out.dir);
  return out;
}

void write_manifest(Output& out, const std::string& command, const json& params, std::uint64_t seed,
                    std::chrono::steady_clock::time_point start) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"command", command},
                   {"parameters", params},
                   {"seed", seed},
                   {"version", FQAOA_VERSION},
                   {"outputs", out.files},
                   {"wall_time_seconds", wall}};
  write_text_file((out.dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
  if (out.empty()) throw UsageError("empty angle list");
  return out;
}

MitigationVariant parse_variant(const std::string& v) {
  if (v == "inverse") return MitigationVariant::Inverse;
  if (v == "clipped") return MitigationVariant::Clipped;
  throw UsageError("variant must be inverse or clipped, got '" + v + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA ground-state preparation for frustrated Ising unit cells"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: $FQAOA_THREADS or hardware)");
  std::string out_dir = ".";

  // phase-diagram ------------------------------------------------------------
  auto* pd = app.add_subcommand("phase-diagram", "Exhaustive ground-state magnetization over (h, J2)");
  ModelArgs pd_model;
  pd->add_option("--kind", pd_model.kind, "Lattice: square | ss | triangular")->capture_default_str();
  pd->add_option("--n", pd_model.n, "Sites per side")->capture_default_str();
  pd->add_option("--j1", pd_model.j1, "Nearest-neighbour coupling")->capture_default_str();
  AxesArgs pd_axes;
  pd_axes.add(pd);
  pd->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // qaoa-grid ----------------------------------------------------------------
  auto* qg = app.add_subcommand("qaoa-grid", "p=1 grid search over (gamma, beta) for one Hamiltonian");
  ModelArgs qg_model;
  qg_model.add(qg);
  GridArgs qg_grid;
  qg_grid.add(qg);
  std::string objective = "energy";
  qg->add_option("--objective", objective, "energy | pground")->capture_default_str();
  qg->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // qaoa-sweep ---------------------------------------------------------------
  auto* qs = app.add_subcommand("qaoa-sweep", "Grid search at every (h, J2) cell; both objectives");
  ModelArgs qs_model;
  qs->add_option("--kind", qs_model.kind, "Lattice: square | ss | triangular")->capture_default_str();
  qs->add_option("--n", qs_model.n, "Sites per side")->capture_default_str();
  qs->add_option("--j1", qs_model.j1, "Nearest-neighbour coupling")->capture_default_str();
  AxesArgs qs_axes;
  qs_axes.add(qs);
  GridArgs qs_grid;
  qs_grid.add(qs);
  qs->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // finite-size --------------------------------------------------------------
  auto* fsz = app.add_subcommand("finite-size", "Annealed magnetization grids, RMSE vs the largest size, power-law fit");
  std::string fs_kind = "triangular";
  std::string sizes_text = "3,5,7,10,15,20,30";
  AxesArgs fs_axes;
  AnnealConfig anneal_cfg;
  fsz->add_option("--kind", fs_kind, "Lattice: square | ss | triangular")->capture_default_str();
  fsz->add_option("--sizes", sizes_text, "Comma-separated sides; the largest is the reference")->capture_default_str();
  double fs_j1 = 1.0;
  fsz->add_option("--j1", fs_j1, "Nearest-neighbour coupling")->capture_default_str();
  fs_axes.add(fsz);
  fsz->add_option("--restarts", anneal_cfg.restarts, "Anneals per cell")->capture_default_str();
  fsz->add_option("--sweeps", anneal_cfg.sweeps, "Sweeps per anneal")->capture_default_str();
  fsz->add_option("--t-hot", anneal_cfg.t_hot, "Start temperature (0 = derived from the model)");
  fsz->add_option("--t-cold", anneal_cfg.t_cold, "End temperature (0 = 0.05 J1)");
  fsz->add_option("--seed", anneal_cfg.seed, "Generator seed")->capture_default_str();
  fsz->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // sample -------------------------------------------------------------------
  auto* sm = app.add_subcommand("sample", "Evolve, sample shots, optionally add readout noise and mitigate");
  ModelArgs sm_model;
  sm_model.add(sm);
  std::string gammas_text;
  std::string betas_text;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  std::string spam_file;
  double flip = -1.0;
  double retention = -1.0;
  std::string variant = "none";
  sm->add_option("--gamma,--gamma1", gammas_text, "Phase angles, comma separated; '0.05pi' allowed")->required();
  sm->add_option("--beta,--beta1", betas_text, "Mixer angles, comma separated; '0.143pi' allowed")->required();
  sm->add_option("--shots", shots, "Measurement shots")->capture_default_str();
  sm->add_option("--seed", seed, "Generator seed")->capture_default_str();
  auto* spam_opt = sm->add_option("--spam", spam_file, "Readout model JSON {p01: [...], p10: [...]}");
  auto* flip_opt = sm->add_option("--flip", flip, "Uniform symmetric flip probability");
  auto* ret_opt = sm->add_option("--retention", retention, "Uniform flips with (1-q)^N = retention");
  spam_opt->excludes(flip_opt)->excludes(ret_opt);
  flip_opt->excludes(ret_opt);
  sm->add_option("--variant", variant, "Mitigation: none | inverse | clipped")->capture_default_str();
  sm->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // mitigate -----------------------------------------------------------------
  auto* mt = app.add_subcommand("mitigate", "Apply readout mitigation to a counts file");
  std::string counts_file;
  std::string mt_spam_file;
  std::string mt_variant = "clipped";
  mt->add_option("--counts", counts_file, "Counts JSON written by 'sample'")->required();
  mt->add_option("--spam", mt_spam_file, "Readout model JSON")->required();
  mt->add_option("--variant", mt_variant, "inverse | clipped")->capture_default_str();
  mt->add_option("--out", out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  const unsigned n_threads = resolve_threads(threads);

  try {
    if (pd->parsed()) {
      const auto h_axis = pd_axes.h_axis();
      const auto j2_axis = pd_axes.j2_axis();
      const auto d = phase_diagram(parse_lattice_kind(pd_model.kind), pd_model.n, h_axis, j2_axis, pd_model.j1,
                                   n_threads);
      Output out = prepare_output(out_dir);
      out.write("phase_diagram.csv", phase_diagram_csv(d));
      out.write("phase_diagram.json", to_json(d).dump(2) + "\n");
      json params = pd_axes.to_json();
      params["kind"] = pd_model.kind;
      params["n"] = pd_model.n;
      params["j1"] = pd_model.j1;
      write_manifest(out, "phase-diagram", params, 0, start);
      std::cout << d.cells.size() << " cells, " << d.num_regions << " regions -> " << out.dir.string() << "\n";

    } else if (qg->parsed()) {
      Objective obj;
      if (objective == "energy") obj = Objective::Energy;
      else if (objective == "pground") obj = Objective::GroundProb;
      else throw UsageError("objective must be energy or pground");
      const auto model = qg_model.model();
      const auto r = grid_search(model, qg_grid.spec(), obj, {n_threads, true});
      Output out = prepare_output(out_dir);
      out.write("grid_surface.csv", grid_surface_csv(r));
      json doc = to_json(r);
      doc["model"] = to_json(model);
      doc["ground_states"] = to_json(enumerate_ground_states(model));
      out.write("grid_result.json", doc.dump(2) + "\n");
      json params = qg_model.to_json();
      params["grid"] = qg_grid.to_json();
      params["objective"] = objective;
      write_manifest(out, "qaoa-grid", params, 0, start);
      const auto& b = r.best();
      std::cout << "best (" << objective << "): gamma=" << b.gamma / std::numbers::pi << "pi beta="
                << b.beta / std::numbers::pi << "pi <H>=" << b.energy << " P_ground=" << b.p_ground << "\n";

    } else if (qs->parsed()) {
      const auto h_axis = qs_axes.h_axis();
      const auto j2_axis = qs_axes.j2_axis();
      if (h_axis.empty() || j2_axis.empty()) throw UsageError("empty sweep range");
      const auto cell = build_unit_cell(parse_lattice_kind(qs_model.kind), qs_model.n);
      const auto spec = qs_grid.spec();
      const auto diagram = phase_diagram(cell.kind, cell.n, h_axis, j2_axis, qs_model.j1, n_threads);
      const std::size_t count = h_axis.size() * j2_axis.size();
      std::vector<GridResult> results(count);
      const auto terms = build_term_table(cell);
      // Cells run one after another; each grid search uses the thread pool.
      for (std::size_t k = 0; k < count; ++k) {
        const IsingModel model{cell, qs_model.j1, j2_axis[k % j2_axis.size()], h_axis[k / j2_axis.size()]};
        const auto energies = energy_table(terms, model);
        const auto ground = ground_states_from_table(energies, model.num_spins());
        results[k] = grid_search(energies, ground, iota(model), spec, Objective::Energy, {n_threads, false});
      }
      const auto heatmap = [&](bool energy_objective) {
        std::ostringstream os;
        os << "h,j2,p_ground,gamma,beta,energy,region_id,degeneracy\n";
        for (std::size_t k = 0; k < count; ++k) {
          const auto& p = energy_objective ? results[k].best_energy : results[k].best_prob;
          os << format_double(diagram.cells[k].h) << ',' << format_double(diagram.cells[k].j2) << ','
             << format_double(p.p_ground) << ',' << format_double(p.gamma) << ',' << format_double(p.beta) << ','
             << format_double(p.energy) << ',' << diagram.cells[k].region_id << ',' << diagram.cells[k].degeneracy
             << '\n';
        }
        return os.str();
      };
      Output out = prepare_output(out_dir);
      out.write("sweep_energy_objective.csv", heatmap(true));
      out.write("sweep_pground_objective.csv", heatmap(false));
      json params = qs_axes.to_json();
      params["kind"] = qs_model.kind;
      params["n"] = qs_model.n;
      params["j1"] = qs_model.j1;
      params["grid"] = qs_grid.to_json();
      write_manifest(out, "qaoa-sweep", params, 0, start);
      std::cout << count << " cells -> " << out.dir.string() << "\n";

    } else if (fsz->parsed()) {
      auto sizes = parse_int_list(sizes_text);
      if (sizes.size() < 3) throw UsageError("finite-size needs at least 3 sizes including the reference");
      std::sort(sizes.begin(), sizes.end());
      if (std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) throw UsageError("duplicate size");
      const auto kind = parse_lattice_kind(fs_kind);
      const auto h_axis = fs_axes.h_axis();
      const auto j2_axis = fs_axes.j2_axis();
      Output out = prepare_output(out_dir);
      std::vector<MagnetizationGrid> grids;
      for (int n : sizes) {
        grids.push_back(magnetization_grid(kind, n, h_axis, j2_axis, anneal_cfg, fs_j1, n_threads));
        out.write("magnetization_n" + std::to_string(n) + ".csv", magnetization_grid_csv(grids.back()));
      }
      std::vector<SizeError> points;
      json per_size = json::array();
      for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
        points.push_back({static_cast<double>(sizes[i]), rmse(grids[i], grids.back())});
        per_size.push_back({{"n", sizes[i]}, {"rmse", points.back().rmse}});
      }
      json summary = {{"kind", to_string(kind)}, {"reference_n", sizes.back()}, {"rmse", per_size}};
      try {
        summary["fit"] = to_json(fit_power_law(points));
      } catch (const ContractViolation& e) {
        summary["fit"] = nullptr;
        summary["fit_error"] = e.what();
      }
      out.write("finite_size.json", summary.dump(2) + "\n");
      json params = fs_axes.to_json();
      params["kind"] = fs_kind;
      params["sizes"] = sizes;
      params["j1"] = fs_j1;
      params["restarts"] = anneal_cfg.restarts;
      params["sweeps"] = anneal_cfg.sweeps;
      params["t_hot"] = anneal_cfg.t_hot;
      params["t_cold"] = anneal_cfg.t_cold;
      write_manifest(out, "finite-size", params, anneal_cfg.seed, start);
      if (summary["fit"].is_null()) std::cout << "fit skipped: " << summary["fit_error"].get<std::string>() << "\n";
      else
        std::cout << "exponent " << summary["fit"]["exponent"] << " +- " << summary["fit"]["exponent_stderr"] << "\n";

    } else if (sm->parsed()) {
      const auto model = sm_model.model();
      const QaoaAngles angles{parse_angle_list(gammas_text), parse_angle_list(betas_text)};
      if (angles.gammas.size() != angles.betas.size()) throw UsageError("--gamma and --beta need the same length");
      if (shots == 0) throw UsageError("--shots must be >= 1");
      const auto energies = energy_table(model, n_threads);
      const auto ground = ground_states_from_table(energies, model.num_spins());
      const auto state = evolve(energies, model.num_spins(), angles);
      const int nq = model.num_spins();

      std::optional<SpamModel> spam;
      if (!spam_file.empty()) spam = spam_model_from_json(read_json_file(spam_file));
      else if (flip >= 0.0) spam = SpamModel::uniform(nq, flip);
      else if (retention >= 0.0) spam = SpamModel::from_retention(nq, retention);
      if (spam && spam->num_qubits() != nq) throw UsageError("readout model width does not match the lattice");
      if (variant != "none" && !spam) throw UsageError("mitigation needs a readout model (--spam/--flip/--retention)");

      const auto pure = state.probabilities();
      const auto measured = spam ? apply_channel(pure, *spam) : pure;
      const auto counts = sample_distribution(measured, nq, shots, seed);
      const auto freq = counts_to_distribution(counts);
      std::optional<MitigationResult> mitigated;
      if (variant != "none") mitigated = mitigate(freq, *spam, parse_variant(variant));

      Output out = prepare_output(out_dir);
      out.write("counts.json", to_json(counts).dump(2) + "\n");
      std::ostringstream report;
      report << "bitstring,p_pure,sem,p_estimate,within_1sem,p_mitigated\n";
      json states = json::array();
      for (auto z : ground.states) {
        const double p = pure[z];
        const double sem = sem_probability(std::clamp(p, 0.0, 1.0), shots);
        const double est = freq[z];
        const double mit = mitigated ? mitigated->distribution[z] : est;
        report << bitstring(z, nq) << ',' << format_double(p) << ',' << format_double(sem) << ','
               << format_double(est) << ',' << (std::abs(est - p) <= sem ? 1 : 0) << ',' << format_double(mit)
               << '\n';
        states.push_back({{"bitstring", bitstring(z, nq)},
                          {"p_pure", p},
                          {"sem", sem},
                          {"p_estimate", est},
                          {"p_mitigated", mit}});
      }
      out.write("ground_state_report.csv", report.str());
      json doc = {{"model", to_json(model)},
                  {"gammas", angles.gammas},
                  {"betas", angles.betas},
                  {"shots", shots},
                  {"energy_expectation", expectation_energy(state, energies)},
                  {"energy_sem", sem_energy(state, energies, shots)},
                  {"p_ground_pure", p_ground(state, ground)},
                  {"ground_states", states}};
      if (spam) doc["spam"] = to_json(*spam);
      if (mitigated) doc["mitigation"] = to_json(*mitigated);
      out.write("sample_report.json", doc.dump(2) + "\n");
      json params = sm_model.to_json();
      params["gamma"] = gammas_text;
      params["beta"] = betas_text;
      params["shots"] = shots;
      params["variant"] = variant;
      params["spam"] = spam ? to_json(*spam) : json(nullptr);
      write_manifest(out, "sample", params, seed, start);
      std::cout << "P_ground(pure)=" << p_ground(state, ground) << " over " << ground.degeneracy()
                << " ground states -> " << out.dir.string() << "\n";

    } else if (mt->parsed()) {
      const auto counts = shot_counts_from_json(read_json_file(counts_file));
      const auto spam = spam_model_from_json(read_json_file(mt_spam_file));
      if (spam.num_qubits() != counts.num_qubits) throw UsageError("readout model width does not match counts");
      const auto r = mitigate(counts_to_distribution(counts), spam, parse_variant(mt_variant));
      Output out = prepare_output(out_dir);
      out.write("mitigation.json", to_json(r).dump(2) + "\n");
      write_manifest(out, "mitigate", {{"counts", counts_file}, {"spam", mt_spam_file}, {"variant", mt_variant}}, 0,
                     start);
      std::cout << "clamped mass " << r.clamped_mass << " -> " << out.dir.string() << "\n";
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
