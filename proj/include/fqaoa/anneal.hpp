#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fqaoa/error.hpp"
#include "fqaoa/ising.hpp"
#include "fqaoa/parallel.hpp"

namespace fqaoa {

/// Best-of-restarts Metropolis annealing. A zero temperature means "derive
/// from the model": t_hot = |J1| * max(1, |h| + 4 |J2|), t_cold = 0.05 |J1|.
/// Each sweep visits every site once in index order.
struct AnnealConfig {
  int sweeps = 200;
  double t_hot = 0.0;
  double t_cold = 0.0;
  int restarts = 50;
  std::uint64_t seed = 0;
  // Zero-temperature sweeps after the schedule until no single flip lowers the energy.
  bool quench = true;
};

struct AnnealResult {
  SpinConfig config;
  double energy = 0.0;
  // Final energy of each restart, in restart order.
  std::vector<double> restart_energies;
};

struct Temperatures {
  double hot;
  double cold;
};

inline Temperatures resolve_temperatures(const IsingModel& model, const AnnealConfig& config) {
  const double j1 = std::abs(model.j1) > 0.0 ? std::abs(model.j1) : 1.0;
  Temperatures t{config.t_hot, config.t_cold};
  if (t.hot <= 0.0) t.hot = j1 * std::max(1.0, std::abs(model.h) + 4.0 * std::abs(model.j2));
  if (t.cold <= 0.0) t.cold = 0.05 * j1;
  return t;
}

namespace detail {

// Compressed adjacency: neighbours of site i are [offset[i], offset[i+1]).
struct Couplings {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> neighbor;
  std::vector<double> weight;

  explicit Couplings(const IsingModel& model) {
    const auto n_sites = static_cast<std::size_t>(model.num_spins());
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n_sites);
    for (const auto& e : model.cell.nn_edges) {
      adj[e.first].emplace_back(e.second, model.j1);
      adj[e.second].emplace_back(e.first, model.j1);
    }
    for (const auto& e : model.cell.nnn_edges) {
      adj[e.first].emplace_back(e.second, model.j2);
      adj[e.second].emplace_back(e.first, model.j2);
    }
    offset.push_back(0);
    for (const auto& list : adj) {
      for (const auto& [j, w] : list) {
        neighbor.push_back(j);
        weight.push_back(w);
      }
      offset.push_back(neighbor.size());
    }
  }
};

inline std::vector<std::int8_t> anneal_once(const IsingModel& model, const Couplings& couplings,
                                            const Temperatures& temps, const AnnealConfig& config,
                                            std::uint64_t seed) {
  const std::size_t n_sites = static_cast<std::size_t>(model.num_spins());
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<std::int8_t> s(n_sites);
  for (auto& v : s) v = (rng() >> 63) ? 1 : -1;

  // field[i] = sum_j J_ij s_j + h; flipping i changes the energy by -2 s_i field[i].
  std::vector<double> field(n_sites, model.h);
  for (std::size_t i = 0; i < n_sites; ++i)
    for (std::size_t k = couplings.offset[i]; k < couplings.offset[i + 1]; ++k)
      field[i] += couplings.weight[k] * s[couplings.neighbor[k]];

  const auto flip = [&](std::size_t i) {
    s[i] = static_cast<std::int8_t>(-s[i]);
    const double twice = 2.0 * s[i];
    for (std::size_t k = couplings.offset[i]; k < couplings.offset[i + 1]; ++k)
      field[couplings.neighbor[k]] += couplings.weight[k] * twice;
  };

  const int sweeps = std::max(1, config.sweeps);
  const double ratio = temps.cold / temps.hot;
  for (int t = 0; t < sweeps; ++t) {
    const double frac = sweeps == 1 ? 1.0 : static_cast<double>(t) / (sweeps - 1);
    const double beta = 1.0 / (temps.hot * std::pow(ratio, frac));
    for (std::size_t i = 0; i < n_sites; ++i) {
      const double delta = -2.0 * s[i] * field[i];
      if (delta <= 0.0 || uniform() < std::exp(-beta * delta)) flip(i);
    }
  }

  if (config.quench) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n_sites; ++i) {
        if (-2.0 * s[i] * field[i] < -1e-12) {
          flip(i);
          improved = true;
        }
      }
    }
  }
  return s;
}

}  // namespace detail

/// Runs config.restarts independent anneals and keeps the lowest energy
/// (earliest restart on ties). Restart r is seeded from (seed, stream, r),
/// so results do not depend on how calls are scheduled.
inline AnnealResult anneal(const IsingModel& model, const AnnealConfig& config, std::uint64_t stream = 0) {
  if (config.restarts < 1) throw ContractViolation("annealing needs at least one restart");
  const Temperatures temps = resolve_temperatures(model, config);
  if (!(temps.cold > 0.0) || !(temps.hot > temps.cold))
    throw ContractViolation("annealing schedule needs t_hot > t_cold > 0");

  const detail::Couplings couplings(model);
  AnnealResult best;
  best.restart_energies.reserve(static_cast<std::size_t>(config.restarts));
  for (int r = 0; r < config.restarts; ++r) {
    const auto spins =
        detail::anneal_once(model, couplings, temps, config, derive_seed(config.seed, stream, static_cast<std::uint64_t>(r)));
    SpinConfig candidate = SpinConfig::from_spins(spins);
    const double e = energy(model, candidate);
    best.restart_energies.push_back(e);
    if (r == 0 || e < best.energy) {
      best.energy = e;
      best.config = std::move(candidate);
    }
  }
  return best;
}

/// Field-aligned magnetization of the annealed ground state over an (h, J2)
/// grid, row-major with h as the row.
struct MagnetizationGrid {
  LatticeKind kind = LatticeKind::Square;
  int n = 0;
  std::vector<double> h_axis;
  std::vector<double> j2_axis;
  std::vector<double> values;
  std::vector<double> energies;

  double at(std::size_t i_h, std::size_t i_j2) const { return values[i_h * j2_axis.size() + i_j2]; }
};

// 0, 0.2, ..., 5.8: thirty points at step 0.2.
inline std::vector<double> default_scan_axis() {
  std::vector<double> axis(30);
  for (std::size_t k = 0; k < axis.size(); ++k) axis[k] = 0.2 * static_cast<double>(k);
  return axis;
}

inline MagnetizationGrid magnetization_grid(LatticeKind kind, int n, std::vector<double> h_axis,
                                            std::vector<double> j2_axis, const AnnealConfig& config,
                                            double j1 = 1.0, unsigned threads = 1) {
  if (h_axis.empty() || j2_axis.empty()) throw ContractViolation("magnetization grid axes must be non-empty");
  const UnitCell cell = build_unit_cell(kind, n);
  MagnetizationGrid grid;
  grid.kind = kind;
  grid.n = n;
  grid.h_axis = std::move(h_axis);
  grid.j2_axis = std::move(j2_axis);
  const std::size_t n_j2 = grid.j2_axis.size();
  const std::size_t count = grid.h_axis.size() * n_j2;
  grid.values.resize(count);
  grid.energies.resize(count);

  parallel_for(count, threads, [&](std::size_t k) {
    const IsingModel model{cell, j1, grid.j2_axis[k % n_j2], grid.h_axis[k / n_j2]};
    const AnnealResult r = anneal(model, config, k);
    grid.values[k] = field_aligned_magnetization(r.config, model.h).to_double();
    grid.energies[k] = r.energy;
  });
  return grid;
}

inline double rmse(const MagnetizationGrid& a, const MagnetizationGrid& ref) {
  if (a.h_axis != ref.h_axis || a.j2_axis != ref.j2_axis || a.values.size() != ref.values.size())
    throw ContractViolation("RMSE needs grids on identical axes");
  if (a.values.empty()) throw ContractViolation("RMSE of empty grids");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double d = a.values[k] - ref.values[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.values.size()));
}

struct SizeError {
  double size = 0.0;
  double rmse = 0.0;
};

/// rmse ~ prefactor * size^exponent, fitted as a straight line in log10-log10.
struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::vector<std::string> warnings;
};

inline PowerLawFit fit_power_law(const std::vector<SizeError>& points) {
  PowerLawFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (!(p.size > 0.0) || !(p.rmse > 0.0)) {
      fit.warnings.push_back("excluded point (n=" + std::to_string(p.size) + ", rmse=" + std::to_string(p.rmse) +
                             "): log undefined");
      continue;
    }
    xs.push_back(std::log10(p.size));
    ys.push_back(std::log10(p.rmse));
  }
  const std::size_t m = xs.size();
  if (m < 3) throw ContractViolation("power-law fit needs at least 3 positive points, got " + std::to_string(m));

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) throw ContractViolation("power-law fit needs at least two distinct sizes");

  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ssr += r * r;
  }
  fit.exponent = slope;
  fit.prefactor = std::pow(10.0, intercept);
  fit.exponent_stderr = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.points_used = m;
  return fit;
}

}  // namespace fqaoa
