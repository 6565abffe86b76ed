#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fqaoa/error.hpp"
#include "fqaoa/ising.hpp"
#include "fqaoa/parallel.hpp"

namespace fqaoa {

using amplitude = std::complex<double>;

/// 2^N amplitudes; bit i of the index is site i (bit 0 least significant).
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int num_qubits)
      : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits, amplitude{0.0, 0.0}) {}
  StateVector(int num_qubits, std::vector<amplitude> amps) : num_qubits_(num_qubits), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << num_qubits))
      throw ContractViolation("amplitude count does not match qubit count");
  }

  static StateVector basis(int num_qubits, std::uint64_t z) {
    StateVector s(num_qubits);
    s.amps_.at(z) = 1.0;
    return s;
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  amplitude& operator[](std::size_t z) { return amps_[z]; }
  const amplitude& operator[](std::size_t z) const { return amps_[z]; }
  std::span<amplitude> amplitudes() { return amps_; }
  std::span<const amplitude> amplitudes() const { return amps_; }

  double probability(std::size_t z) const { return std::norm(amps_[z]); }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t z = 0; z < p.size(); ++z) p[z] = std::norm(amps_[z]);
    return p;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  int num_qubits_ = 0;
  std::vector<amplitude> amps_;
};

struct QaoaAngles {
  std::vector<double> gammas;
  std::vector<double> betas;

  std::size_t layers() const { return gammas.size(); }

  void validate() const {
    if (gammas.empty() || gammas.size() != betas.size())
      throw ContractViolation("QAOA angles need equal-length gamma and beta lists with p >= 1");
  }
};

/// Average coefficient magnitude, weighted by how many terms carry each
/// coefficient. Sets the width of the gamma search window.
inline double iota(const IsingModel& model) {
  const auto counts = edge_counts(model.cell);
  const double n_sites = model.num_spins();
  const double terms = n_sites + static_cast<double>(counts.nn + counts.nnn);
  if (terms <= 0.0) throw DomainError("model has no Hamiltonian terms");
  const double value = (n_sites * model.h + model.j1 * static_cast<double>(counts.nn) +
                        model.j2 * static_cast<double>(counts.nnn)) /
                       terms;
  if (!(value > 0.0))
    throw DomainError("coefficient scale iota = " + std::to_string(value) +
                      " is not positive; the gamma window is undefined");
  return value;
}

inline StateVector initial_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxExhaustiveSpins)
    throw DomainError("statevector size must be in [1, " + std::to_string(kMaxExhaustiveSpins) +
                      "] qubits, got " + std::to_string(num_qubits));
  StateVector s(num_qubits);
  const double a = std::pow(2.0, -0.5 * num_qubits);
  for (auto& amp : s.amplitudes()) amp = a;
  return s;
}

// a_z <- a_z exp(-i gamma E_z)
inline void apply_phase(StateVector& state, std::span<const double> energies, double gamma) {
  if (energies.size() != state.size()) throw ContractViolation("energy table does not match state size");
  if (gamma == 0.0) return;
  for (std::size_t z = 0; z < state.size(); ++z) state[z] *= std::polar(1.0, -gamma * energies[z]);
}

inline void apply_phase(StateVector& state, const IsingModel& model, double gamma) {
  if (model.num_spins() != state.num_qubits()) throw ContractViolation("state width does not match model");
  apply_phase(state, energy_table(model), gamma);
}

// exp(-i beta X) on every qubit.
inline void apply_mixer(StateVector& state, double beta) {
  if (beta == 0.0) return;
  const double c = std::cos(beta);
  const amplitude mis{0.0, -std::sin(beta)};
  auto amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (int q = 0; q < state.num_qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t z = base; z < base + stride; ++z) {
        const amplitude a0 = amps[z];
        const amplitude a1 = amps[z + stride];
        amps[z] = c * a0 + mis * a1;
        amps[z + stride] = mis * a0 + c * a1;
      }
    }
  }
}

inline StateVector evolve(std::span<const double> energies, int num_qubits, const QaoaAngles& angles) {
  angles.validate();
  StateVector state = initial_state(num_qubits);
  for (std::size_t l = 0; l < angles.layers(); ++l) {
    apply_phase(state, energies, angles.gammas[l]);
    apply_mixer(state, angles.betas[l]);
  }
  return state;
}

inline StateVector evolve(const IsingModel& model, const QaoaAngles& angles) {
  check_exhaustive_size(model.num_spins());
  const auto energies = energy_table(model);
  return evolve(energies, model.num_spins(), angles);
}

inline double expectation_energy(const StateVector& state, std::span<const double> energies) {
  if (energies.size() != state.size()) throw ContractViolation("energy table does not match state size");
  double e = 0.0;
  for (std::size_t z = 0; z < state.size(); ++z) e += state.probability(z) * energies[z];
  return e;
}

inline double expectation_energy(const StateVector& state, const IsingModel& model) {
  if (model.num_spins() != state.num_qubits()) throw ContractViolation("state width does not match model");
  return expectation_energy(state, energy_table(model));
}

inline double p_ground(const StateVector& state, const GroundStateSet& ground) {
  if (ground.states.empty()) throw ContractViolation("empty ground-state set");
  if (ground.num_spins != state.num_qubits()) throw ContractViolation("ground set width does not match state");
  double p = 0.0;
  for (auto z : ground.states) p += state.probability(z);
  return p / static_cast<double>(ground.states.size());
}

inline double sem_energy(const StateVector& state, std::span<const double> energies, std::uint64_t n_shots) {
  if (n_shots == 0) throw ContractViolation("n_shots must be >= 1");
  if (energies.size() != state.size()) throw ContractViolation("energy table does not match state size");
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t z = 0; z < state.size(); ++z) {
    const double p = state.probability(z);
    m1 += p * energies[z];
    m2 += p * energies[z] * energies[z];
  }
  return std::sqrt(std::max(0.0, m2 - m1 * m1) / static_cast<double>(n_shots));
}

inline double sem_energy(const StateVector& state, const IsingModel& model, std::uint64_t n_shots) {
  if (model.num_spins() != state.num_qubits()) throw ContractViolation("state width does not match model");
  return sem_energy(state, energy_table(model), n_shots);
}

inline double sem_probability(double p, std::uint64_t n_shots) {
  if (n_shots == 0) throw ContractViolation("n_shots must be >= 1");
  if (p < 0.0 || p > 1.0) throw ContractViolation("probability outside [0, 1]");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n_shots));
}

// ---------------------------------------------------------------------------
// p = 1 grid search
// ---------------------------------------------------------------------------

enum class Objective { Energy, GroundProb };

inline std::string to_string(Objective o) { return o == Objective::Energy ? "energy" : "pground"; }

/// Endpoint-inclusive lattice over beta in [beta_min, beta_max] and gamma in
/// [-w, w] with w = gamma_factor * pi / iota.
struct GridSpec {
  std::size_t n_beta = 201;
  std::size_t n_gamma = 300;
  double beta_min = -std::numbers::pi / 2;
  double beta_max = std::numbers::pi / 2;
  double gamma_factor = 0.55;

  std::size_t evaluations() const { return n_beta * n_gamma; }

  double gamma_halfwidth(double iota_value) const { return gamma_factor * std::numbers::pi / iota_value; }

  // Written about the midpoint so that points mirrored through it are exact negatives.
  static double axis_point(double lo, double hi, std::size_t k, std::size_t count) {
    const double mid = 0.5 * (lo + hi);
    if (count == 1) return mid;
    const double offset = static_cast<double>(2 * k) - static_cast<double>(count - 1);
    return mid + 0.5 * (hi - lo) * offset / static_cast<double>(count - 1);
  }
  double beta(std::size_t j) const { return axis_point(beta_min, beta_max, j, n_beta); }
  double gamma(std::size_t k, double halfwidth) const { return axis_point(-halfwidth, halfwidth, k, n_gamma); }

  void validate() const {
    if (n_beta == 0 || n_gamma == 0) throw ContractViolation("grid needs at least one point per axis");
  }
};

struct GridPoint {
  double gamma = 0.0;
  double beta = 0.0;
  double energy = 0.0;
  double p_ground = 0.0;
};

/// Surfaces are indexed [k * n_beta + j] for gamma index k and beta index j,
/// which is also the scan order used to break ties.
struct GridResult {
  Objective objective = Objective::Energy;
  GridSpec spec;
  double iota = 0.0;
  double gamma_halfwidth = 0.0;
  std::size_t evaluations = 0;
  GridPoint best_energy;
  GridPoint best_prob;
  std::vector<double> energy_surface;
  std::vector<double> p_ground_surface;

  const GridPoint& best() const { return objective == Objective::Energy ? best_energy : best_prob; }
  bool has_surfaces() const { return !energy_surface.empty(); }
};

struct GridOptions {
  unsigned threads = 1;
  bool keep_surfaces = false;
};

namespace detail {

// True when candidate should replace incumbent. `sign` is +1 to minimize
// and -1 to maximize. Values within a relative 1e-12 count as tied; ties go
// to smaller |gamma|, then smaller |beta|, then the earlier scan position
// (the incumbent).
inline bool grid_better(double cand, double cand_gamma, double cand_beta, double inc, double inc_gamma,
                        double inc_beta, double sign) {
  const double tol = 1e-12 * std::max(1.0, std::abs(inc));
  const double diff = sign * (cand - inc);
  if (diff < -tol) return true;
  if (diff > tol) return false;
  if (std::abs(cand_gamma) != std::abs(inc_gamma)) return std::abs(cand_gamma) < std::abs(inc_gamma);
  return std::abs(cand_beta) < std::abs(inc_beta);
}

}  // namespace detail

inline GridResult grid_search(std::span<const double> energies, const GroundStateSet& ground, double iota_value,
                              const GridSpec& spec, Objective objective = Objective::Energy,
                              const GridOptions& options = {}) {
  spec.validate();
  const int num_qubits = ground.num_spins;
  if (energies.size() != (std::size_t{1} << num_qubits))
    throw ContractViolation("energy table does not match ground-state width");

  GridResult result;
  result.objective = objective;
  result.spec = spec;
  result.iota = iota_value;
  result.gamma_halfwidth = spec.gamma_halfwidth(iota_value);

  const std::size_t total = spec.evaluations();
  std::vector<double> e_surface(total);
  std::vector<double> p_surface(total);
  std::atomic<std::size_t> evaluations{0};

  parallel_for(spec.n_gamma, options.threads, [&](std::size_t k) {
    const double gamma = spec.gamma(k, result.gamma_halfwidth);
    StateVector phased = initial_state(num_qubits);
    apply_phase(phased, energies, gamma);
    StateVector state = phased;
    for (std::size_t j = 0; j < spec.n_beta; ++j) {
      std::copy(phased.amplitudes().begin(), phased.amplitudes().end(), state.amplitudes().begin());
      apply_mixer(state, spec.beta(j));
      e_surface[k * spec.n_beta + j] = expectation_energy(state, energies);
      p_surface[k * spec.n_beta + j] = p_ground(state, ground);
      evaluations.fetch_add(1, std::memory_order_relaxed);
    }
  });
  result.evaluations = evaluations.load();

  // Scan-order reduction keeps the answer independent of thread count.
  std::size_t be = 0;
  std::size_t bp = 0;
  const auto gamma_of = [&](std::size_t idx) { return spec.gamma(idx / spec.n_beta, result.gamma_halfwidth); };
  const auto beta_of = [&](std::size_t idx) { return spec.beta(idx % spec.n_beta); };
  for (std::size_t idx = 1; idx < total; ++idx) {
    if (detail::grid_better(e_surface[idx], gamma_of(idx), beta_of(idx), e_surface[be], gamma_of(be), beta_of(be),
                            1.0))
      be = idx;
    if (detail::grid_better(p_surface[idx], gamma_of(idx), beta_of(idx), p_surface[bp], gamma_of(bp), beta_of(bp),
                            -1.0))
      bp = idx;
  }
  result.best_energy = {gamma_of(be), beta_of(be), e_surface[be], p_surface[be]};
  result.best_prob = {gamma_of(bp), beta_of(bp), e_surface[bp], p_surface[bp]};
  if (options.keep_surfaces) {
    result.energy_surface = std::move(e_surface);
    result.p_ground_surface = std::move(p_surface);
  }
  return result;
}

inline GridResult grid_search(const IsingModel& model, const GridSpec& spec = {},
                              Objective objective = Objective::Energy, const GridOptions& options = {}) {
  const double scale = iota(model);
  check_exhaustive_size(model.num_spins());
  const auto energies = energy_table(model, options.threads);
  const auto ground = ground_states_from_table(energies, model.num_spins());
  return grid_search(energies, ground, scale, spec, objective, options);
}

// ---------------------------------------------------------------------------
// Shot sampling
// ---------------------------------------------------------------------------

struct ShotCounts {
  int num_qubits = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [z, c] : counts) t += c;
    return t;
  }
  std::uint64_t count(std::uint64_t z) const {
    const auto it = counts.find(z);
    return it == counts.end() ? 0 : it->second;
  }
};

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// n_shots independent draws from `probs` (length 2^num_qubits, need not be
/// normalized) using an mt19937_64 seeded with `seed`.
inline ShotCounts sample_distribution(std::span<const double> probs, int num_qubits, std::uint64_t n_shots,
                                      std::uint64_t seed) {
  if (n_shots == 0) throw ContractViolation("n_shots must be >= 1");
  if (probs.size() != (std::size_t{1} << num_qubits)) throw ContractViolation("distribution length mismatch");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t z = 0; z < probs.size(); ++z) {
    if (probs[z] < 0.0) throw ContractViolation("cannot sample from negative probabilities");
    acc += probs[z];
    cdf[z] = acc;
  }
  if (!(acc > 0.0)) throw DomainError("cannot sample from an all-zero distribution");

  std::mt19937_64 rng(seed);
  ShotCounts out;
  out.num_qubits = num_qubits;
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    std::size_t z = static_cast<std::size_t>(it - cdf.begin());
    // Rounding can land u on the flat tail of trailing zero-probability states.
    while (z > 0 && probs[z] == 0.0) --z;
    ++out.counts[z];
  }
  return out;
}

/// n_shots independent Born-rule draws; see sample_distribution.
inline ShotCounts sample(const StateVector& state, std::uint64_t n_shots, std::uint64_t seed) {
  return sample_distribution(state.probabilities(), state.num_qubits(), n_shots, seed);
}

}  // namespace fqaoa
