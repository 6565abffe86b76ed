#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fqaoa/anneal.hpp"
#include "fqaoa/ising.hpp"
#include "fqaoa/lattice.hpp"
#include "fqaoa/qaoa.hpp"
#include "fqaoa/spam.hpp"

namespace fqaoa {

using json = nlohmann::json;

// Shortest text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

/// Axis syntax:
///   "v"            single value
///   "lo:hi:step"   lo, lo+step, ... up to hi inclusive (when step divides the span)
///   "lo:hi"        requires `points`; that many evenly spaced values, endpoints included
/// A positive `points` overrides the step of "lo:hi:step" the same way.
inline std::vector<double> parse_axis(std::string_view spec, std::size_t points = 0) {
  std::vector<std::string> parts;
  std::string part;
  std::stringstream ss{std::string(spec)};
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.empty() || parts.size() > 3) throw std::invalid_argument("bad range '" + std::string(spec) + "'");

  if (parts.size() == 1) {
    if (points > 1) throw std::invalid_argument("a single value cannot have several points");
    return {parse_double(parts[0])};
  }
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  if (hi < lo) throw std::invalid_argument("range '" + std::string(spec) + "' has hi < lo");

  if (points > 0) {
    std::vector<double> axis(points);
    for (std::size_t k = 0; k < points; ++k) axis[k] = GridSpec::axis_point(lo, hi, k, points);
    if (points == 1) axis[0] = lo;
    return axis;
  }
  if (parts.size() == 2) throw std::invalid_argument("range '" + std::string(spec) + "' needs a step or --points");
  const double step = parse_double(parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw std::invalid_argument("range '" + std::string(spec) + "' has too many points");
  std::vector<double> axis(count);
  for (std::size_t k = 0; k < count; ++k) axis[k] = lo + static_cast<double>(k) * step;
  return axis;
}

/// Angle in radians; a trailing "pi" (or "π") multiplies by pi, so "0.143pi"
/// and "-pi" are accepted alongside plain radians.
inline double parse_angle(std::string_view text) {
  std::string s(text);
  for (std::string_view suffix : {"pi", "PI", "π"}) {
    if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      std::string coef = s.substr(0, s.size() - suffix.size());
      if (coef.empty() || coef == "+") coef = "1";
      if (coef == "-") coef = "-1";
      if (coef.back() == '*') coef.pop_back();
      return parse_double(coef) * std::numbers::pi;
    }
  }
  return parse_double(s);
}

inline std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size())
      throw std::invalid_argument("bad integer '" + item + "' in list");
    out.push_back(v);
  }
  return out;
}

inline std::string bitstring(std::uint64_t z, int width) { return SpinConfig::from_index(z, width).str(); }

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

inline json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.first, e.second});
  return out;
}

inline json to_json(const UnitCell& cell) {
  return {{"kind", to_string(cell.kind)},
          {"n", cell.n},
          {"nn_edges", edges_json(cell.nn_edges)},
          {"nnn_edges", edges_json(cell.nnn_edges)}};
}

inline UnitCell unit_cell_from_json(const json& j) {
  UnitCell cell;
  cell.kind = parse_lattice_kind(j.at("kind").get<std::string>());
  cell.n = j.at("n").get<int>();
  const auto read = [&](const char* key) {
    std::vector<Edge> edges;
    for (const auto& pair : j.at(key)) {
      const auto a = pair.at(0).get<std::uint32_t>();
      const auto b = pair.at(1).get<std::uint32_t>();
      if (a == b) throw std::invalid_argument("self-loop in edge list");
      if (a >= static_cast<std::uint32_t>(cell.num_sites()) || b >= static_cast<std::uint32_t>(cell.num_sites()))
        throw std::invalid_argument("edge endpoint outside the lattice");
      edges.emplace_back(a, b);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  cell.nn_edges = read("nn_edges");
  cell.nnn_edges = read("nnn_edges");
  return cell;
}

inline json to_json(const IsingModel& model) {
  return {{"cell", to_json(model.cell)}, {"j1", model.j1}, {"j2", model.j2}, {"h", model.h}};
}

inline json to_json(const GroundStateSet& g) {
  json configs = json::array();
  for (auto z : g.states) configs.push_back(bitstring(z, g.num_spins));
  return {{"energy", g.energy}, {"degeneracy", g.degeneracy()}, {"configs", configs}};
}

inline std::string phase_diagram_csv(const PhaseDiagram& d) {
  std::ostringstream os;
  os << "h,j2,mean_M,region_id,degeneracy,energy\n";
  for (const auto& c : d.cells)
    os << format_double(c.h) << ',' << format_double(c.j2) << ',' << format_double(c.mean_m.to_double()) << ','
       << c.region_id << ',' << c.degeneracy << ',' << format_double(c.energy) << '\n';
  return os.str();
}

inline json to_json(const PhaseDiagram& d) {
  json cells = json::array();
  for (const auto& c : d.cells)
    cells.push_back({{"h", c.h},
                     {"j2", c.j2},
                     {"mean_M", c.mean_m.to_double()},
                     {"mean_M_exact", c.mean_m.str()},
                     {"region_id", c.region_id},
                     {"degeneracy", c.degeneracy},
                     {"energy", c.energy}});
  return {{"kind", to_string(d.kind)}, {"n", d.n},           {"j1", d.j1},
          {"h_axis", d.h_axis},        {"j2_axis", d.j2_axis}, {"num_regions", d.num_regions},
          {"cells", cells}};
}

inline json to_json(const GridPoint& p) {
  return {{"gamma", p.gamma},
          {"beta", p.beta},
          {"gamma_over_pi", p.gamma / std::numbers::pi},
          {"beta_over_pi", p.beta / std::numbers::pi},
          {"energy", p.energy},
          {"p_ground", p.p_ground}};
}

inline json to_json(const GridResult& r) {
  return {{"objective", to_string(r.objective)},
          {"n_beta", r.spec.n_beta},
          {"n_gamma", r.spec.n_gamma},
          {"beta_range", {r.spec.beta_min, r.spec.beta_max}},
          {"gamma_range", {-r.gamma_halfwidth, r.gamma_halfwidth}},
          {"iota", r.iota},
          {"evaluations", r.evaluations},
          {"best_energy_point", to_json(r.best_energy)},
          {"best_prob_point", to_json(r.best_prob)}};
}

inline std::string grid_surface_csv(const GridResult& r) {
  if (!r.has_surfaces()) throw ContractViolation("grid result was computed without surfaces");
  std::ostringstream os;
  os << "gamma,beta,energy,p_ground\n";
  for (std::size_t k = 0; k < r.spec.n_gamma; ++k) {
    const double gamma = r.spec.gamma(k, r.gamma_halfwidth);
    for (std::size_t j = 0; j < r.spec.n_beta; ++j) {
      const std::size_t idx = k * r.spec.n_beta + j;
      os << format_double(gamma) << ',' << format_double(r.spec.beta(j)) << ','
         << format_double(r.energy_surface[idx]) << ',' << format_double(r.p_ground_surface[idx]) << '\n';
    }
  }
  return os.str();
}

inline std::string magnetization_grid_csv(const MagnetizationGrid& g) {
  std::ostringstream os;
  os << "h,j2,M\n";
  for (std::size_t i = 0; i < g.h_axis.size(); ++i)
    for (std::size_t j = 0; j < g.j2_axis.size(); ++j)
      os << format_double(g.h_axis[i]) << ',' << format_double(g.j2_axis[j]) << ',' << format_double(g.at(i, j))
         << '\n';
  return os.str();
}

// Reads the h,j2,M layout written above (h-major rows).
inline MagnetizationGrid magnetization_grid_from_csv(std::istream& in, LatticeKind kind = LatticeKind::Square,
                                                     int n = 0) {
  std::string line;
  if (!std::getline(in, line) || line != "h,j2,M") throw std::invalid_argument("magnetization CSV header mismatch");
  MagnetizationGrid g;
  g.kind = kind;
  g.n = n;
  std::vector<std::pair<double, double>> keys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ','))
      throw std::invalid_argument("malformed magnetization CSV row '" + line + "'");
    const double h = parse_double(a);
    const double j2 = parse_double(b);
    if (g.h_axis.empty() || g.h_axis.back() != h) g.h_axis.push_back(h);
    if (g.h_axis.size() == 1) g.j2_axis.push_back(j2);
    keys.emplace_back(h, j2);
    g.values.push_back(parse_double(c));
  }
  if (g.values.size() != g.h_axis.size() * g.j2_axis.size())
    throw std::invalid_argument("magnetization CSV is not a full grid");
  for (std::size_t k = 0; k < keys.size(); ++k)
    if (keys[k].second != g.j2_axis[k % g.j2_axis.size()])
      throw std::invalid_argument("magnetization CSV rows are not h-major");
  g.energies.assign(g.values.size(), 0.0);
  return g;
}

inline json to_json(const PowerLawFit& f) {
  return {{"prefactor", f.prefactor},
          {"exponent", f.exponent},
          {"exponent_stderr", f.exponent_stderr},
          {"r_squared", f.r_squared},
          {"points_used", f.points_used},
          {"warnings", f.warnings}};
}

inline json to_json(const SpamModel& m) { return {{"p01", m.p01}, {"p10", m.p10}}; }

inline SpamModel spam_model_from_json(const json& j) {
  SpamModel m{j.at("p01").get<std::vector<double>>(), j.at("p10").get<std::vector<double>>()};
  m.validate();
  return m;
}

inline json to_json(const ShotCounts& c) {
  json counts = json::object();
  for (const auto& [z, n] : c.counts) counts[bitstring(z, c.num_qubits)] = n;
  return {{"num_qubits", c.num_qubits}, {"shots", c.total()}, {"counts", counts}};
}

inline ShotCounts shot_counts_from_json(const json& j) {
  ShotCounts c;
  c.num_qubits = j.at("num_qubits").get<int>();
  for (const auto& [key, value] : j.at("counts").items()) {
    const SpinConfig cfg = SpinConfig::parse(key);
    if (cfg.width() != c.num_qubits) throw std::invalid_argument("bitstring '" + key + "' has the wrong width");
    c.counts[cfg.index()] += value.get<std::uint64_t>();
  }
  if (j.contains("shots") && j.at("shots").get<std::uint64_t>() != c.total())
    throw std::invalid_argument("shot total does not match the sum of counts");
  return c;
}

inline json to_json(const MitigationResult& r) {
  return {{"variant", to_string(r.variant)}, {"clamped_mass", r.clamped_mass}, {"distribution", r.distribution}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace fqaoa
