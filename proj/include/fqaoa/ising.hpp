#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fqaoa/error.hpp"
#include "fqaoa/fraction.hpp"
#include "fqaoa/lattice.hpp"
#include "fqaoa/parallel.hpp"

namespace fqaoa {

// Largest spin count for which the 2^N exhaustive routines are allowed.
inline constexpr int kMaxExhaustiveSpins = 24;

// Energies closer than this are treated as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Classical Ising Hamiltonian on a unit cell:
///   E(s) = J1 * sum_NN s_i s_j + J2 * sum_NNN s_i s_j + h * sum_i s_i
/// with s_i = 1 - 2 z_i. The field term is taken literally, so h > 0 favours
/// s = -1 (z = 1).
struct IsingModel {
  UnitCell cell;
  double j1 = 1.0;
  double j2 = 0.0;
  double h = 0.0;

  int num_spins() const { return cell.num_sites(); }
};

inline IsingModel make_model(LatticeKind kind, int n, double j1, double j2, double h) {
  return IsingModel{build_unit_cell(kind, n), j1, j2, h};
}

/// Basis label z over N sites; bit i is site i in row-major order.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
      if (b > 1) throw ContractViolation("spin configuration bits must be 0 or 1");
  }

  static SpinConfig from_index(std::uint64_t z, int width) {
    if (width < 0 || width > 64) throw ContractViolation("index configs hold at most 64 sites");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) bits[i] = static_cast<std::uint8_t>((z >> i) & 1u);
    return SpinConfig(std::move(bits));
  }

  static SpinConfig from_spins(std::span<const std::int8_t> spins) {
    std::vector<std::uint8_t> bits(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
      if (spins[i] != 1 && spins[i] != -1) throw ContractViolation("spins must be +1 or -1");
      bits[i] = spins[i] == 1 ? 0 : 1;
    }
    return SpinConfig(std::move(bits));
  }

  // Inverse of str(): character k is site k.
  static SpinConfig parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("bitstring may only contain '0'/'1'");
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return SpinConfig(std::move(bits));
  }

  int width() const { return static_cast<int>(bits_.size()); }
  int bit(int i) const { return bits_[static_cast<std::size_t>(i)]; }
  int spin(int i) const { return 1 - 2 * bit(i); }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::uint64_t index() const {
    if (width() > 64) throw ContractViolation("configuration wider than 64 sites has no index");
    std::uint64_t z = 0;
    for (int i = 0; i < width(); ++i) z |= static_cast<std::uint64_t>(bits_[i]) << i;
    return z;
  }

  SpinConfig complement() const {
    auto bits = bits_;
    for (auto& b : bits) b ^= 1u;
    return SpinConfig(std::move(bits));
  }

  std::string str() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = static_cast<char>('0' + bits_[i]);
    return out;
  }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
  friend auto operator<=>(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Integer parts of the energy: E = j1 * nn + j2 * nnn + h * field.
struct EnergyTerms {
  std::int64_t nn = 0;
  std::int64_t nnn = 0;
  std::int64_t field = 0;

  double combine(const IsingModel& m) const {
    return m.j1 * static_cast<double>(nn) + m.j2 * static_cast<double>(nnn) +
           m.h * static_cast<double>(field);
  }
};

inline EnergyTerms energy_terms(const UnitCell& cell, const SpinConfig& config) {
  if (config.width() != cell.num_sites())
    throw ContractViolation("configuration width " + std::to_string(config.width()) +
                            " does not match lattice with " + std::to_string(cell.num_sites()) +
                            " sites");
  EnergyTerms t;
  for (const auto& e : cell.nn_edges) t.nn += config.spin(e.first) * config.spin(e.second);
  for (const auto& e : cell.nnn_edges) t.nnn += config.spin(e.first) * config.spin(e.second);
  for (int i = 0; i < config.width(); ++i) t.field += config.spin(i);
  return t;
}

// Same decomposition for a basis index; s_i s_j = 1 - 2 (z_i xor z_j).
inline EnergyTerms energy_terms(const UnitCell& cell, std::uint64_t z) {
  EnergyTerms t;
  for (const auto& e : cell.nn_edges)
    t.nn += 1 - 2 * static_cast<std::int64_t>(((z >> e.first) ^ (z >> e.second)) & 1u);
  for (const auto& e : cell.nnn_edges)
    t.nnn += 1 - 2 * static_cast<std::int64_t>(((z >> e.first) ^ (z >> e.second)) & 1u);
  t.field = cell.num_sites() - 2 * static_cast<std::int64_t>(std::popcount(z));
  return t;
}

inline double energy(const IsingModel& model, const SpinConfig& config) {
  return energy_terms(model.cell, config).combine(model);
}

inline double energy(const IsingModel& model, std::uint64_t z) {
  return energy_terms(model.cell, z).combine(model);
}

inline Fraction magnetization(const SpinConfig& config) {
  if (config.width() == 0) throw ContractViolation("magnetization of an empty configuration");
  std::int64_t sum = 0;
  for (int i = 0; i < config.width(); ++i) sum += config.spin(i);
  return Fraction(sum, config.width());
}

// Sign flipped so that spins lowering the field energy count positive.
inline Fraction field_aligned_magnetization(const SpinConfig& config, double h) {
  const Fraction m = magnetization(config);
  return h > 0.0 ? -m : m;
}

inline void check_exhaustive_size(int num_spins) {
  if (num_spins > kMaxExhaustiveSpins)
    throw DomainError("exhaustive enumeration limited to " + std::to_string(kMaxExhaustiveSpins) +
                      " spins, model has " + std::to_string(num_spins));
  if (num_spins < 1) throw ContractViolation("model has no spins");
}

/// Per-basis-state integer energy parts, reused across any (J1, J2, h).
struct TermTable {
  int num_spins = 0;
  std::vector<std::int32_t> nn;
  std::vector<std::int32_t> nnn;
  std::vector<std::int32_t> field;

  std::size_t size() const { return nn.size(); }

  double energy(std::size_t z, double j1, double j2, double h) const {
    return j1 * static_cast<double>(nn[z]) + j2 * static_cast<double>(nnn[z]) +
           h * static_cast<double>(field[z]);
  }
};

inline TermTable build_term_table(const UnitCell& cell, unsigned threads = 1) {
  check_exhaustive_size(cell.num_sites());
  TermTable table;
  table.num_spins = cell.num_sites();
  const std::size_t dim = std::size_t{1} << table.num_spins;
  table.nn.resize(dim);
  table.nnn.resize(dim);
  table.field.resize(dim);
  constexpr std::size_t kChunk = 1u << 12;
  const std::size_t chunks = (dim + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(dim, (c + 1) * kChunk);
    for (std::size_t z = c * kChunk; z < end; ++z) {
      const EnergyTerms t = energy_terms(cell, static_cast<std::uint64_t>(z));
      table.nn[z] = static_cast<std::int32_t>(t.nn);
      table.nnn[z] = static_cast<std::int32_t>(t.nnn);
      table.field[z] = static_cast<std::int32_t>(t.field);
    }
  });
  return table;
}

// energy(model, z) for every z in [0, 2^N).
inline std::vector<double> energy_table(const TermTable& terms, const IsingModel& model) {
  std::vector<double> out(terms.size());
  for (std::size_t z = 0; z < out.size(); ++z) out[z] = terms.energy(z, model.j1, model.j2, model.h);
  return out;
}

inline std::vector<double> energy_table(const IsingModel& model, unsigned threads = 1) {
  return energy_table(build_term_table(model.cell, threads), model);
}

/// All minimizers of the energy; `states` are basis indices in ascending order.
struct GroundStateSet {
  double energy = 0.0;
  int num_spins = 0;
  std::vector<std::uint64_t> states;

  std::size_t degeneracy() const { return states.size(); }

  std::vector<SpinConfig> configs() const {
    std::vector<SpinConfig> out;
    out.reserve(states.size());
    for (auto z : states) out.push_back(SpinConfig::from_index(z, num_spins));
    return out;
  }

  bool contains(std::uint64_t z) const { return std::binary_search(states.begin(), states.end(), z); }
};

inline GroundStateSet ground_states_from_table(std::span<const double> energies, int num_spins) {
  if (energies.empty()) throw ContractViolation("empty energy table");
  GroundStateSet set;
  set.num_spins = num_spins;
  set.energy = *std::min_element(energies.begin(), energies.end());
  for (std::size_t z = 0; z < energies.size(); ++z)
    if (energies[z] <= set.energy + kDegeneracyTolerance) set.states.push_back(z);
  return set;
}

inline GroundStateSet enumerate_ground_states(const IsingModel& model, unsigned threads = 1) {
  check_exhaustive_size(model.num_spins());
  const auto energies = energy_table(model, threads);
  return ground_states_from_table(energies, model.num_spins());
}

// Mean of the field-aligned magnetization over the degenerate set.
inline Fraction mean_field_aligned_magnetization(const GroundStateSet& ground, double h) {
  if (ground.states.empty()) throw ContractViolation("empty ground-state set");
  std::int64_t total = 0;
  for (auto z : ground.states) total += ground.num_spins - 2 * std::popcount(z);
  const Fraction mean(total, static_cast<std::int64_t>(ground.num_spins) *
                                 static_cast<std::int64_t>(ground.states.size()));
  return h > 0.0 ? -mean : mean;
}

// Spreadsheet-style labels: A..Z, AA, AB, ...
inline std::string region_label(std::size_t k) {
  std::string label;
  ++k;
  while (k > 0) {
    --k;
    label.insert(label.begin(), static_cast<char>('A' + k % 26));
    k /= 26;
  }
  return label;
}

struct PhaseCell {
  double h = 0.0;
  double j2 = 0.0;
  Fraction mean_m;
  std::string region_id;
  std::size_t degeneracy = 0;
  double energy = 0.0;
};

/// Ground-state magnetization over an (h, J2) grid. Cells are stored
/// row-major with h as the row: cell(i_h, i_j2) = cells[i_h * j2_axis.size() + i_j2].
struct PhaseDiagram {
  LatticeKind kind = LatticeKind::Square;
  int n = 0;
  double j1 = 1.0;
  std::vector<double> h_axis;
  std::vector<double> j2_axis;
  std::vector<PhaseCell> cells;
  std::size_t num_regions = 0;

  const PhaseCell& at(std::size_t i_h, std::size_t i_j2) const {
    return cells[i_h * j2_axis.size() + i_j2];
  }
};

inline PhaseDiagram phase_diagram(LatticeKind kind, int n, std::vector<double> h_axis,
                                  std::vector<double> j2_axis, double j1 = 1.0,
                                  unsigned threads = 1) {
  if (h_axis.empty() || j2_axis.empty()) throw ContractViolation("phase diagram axes must be non-empty");
  const UnitCell cell = build_unit_cell(kind, n);
  const TermTable terms = build_term_table(cell, threads);

  PhaseDiagram diagram;
  diagram.kind = kind;
  diagram.n = n;
  diagram.j1 = j1;
  diagram.h_axis = std::move(h_axis);
  diagram.j2_axis = std::move(j2_axis);
  const std::size_t n_j2 = diagram.j2_axis.size();
  const std::size_t count = diagram.h_axis.size() * n_j2;

  std::vector<GroundStateSet> grounds(count);
  diagram.cells.resize(count);
  parallel_for(count, threads, [&](std::size_t k) {
    const double h = diagram.h_axis[k / n_j2];
    const double j2 = diagram.j2_axis[k % n_j2];
    std::vector<double> energies(terms.size());
    for (std::size_t z = 0; z < energies.size(); ++z) energies[z] = terms.energy(z, j1, j2, h);
    grounds[k] = ground_states_from_table(energies, terms.num_spins);
    PhaseCell& pc = diagram.cells[k];
    pc.h = h;
    pc.j2 = j2;
    pc.energy = grounds[k].energy;
    pc.degeneracy = grounds[k].degeneracy();
    pc.mean_m = mean_field_aligned_magnetization(grounds[k], h);
  });

  // Deterministic post-pass: labels in first-encountered scan order.
  std::map<std::vector<std::uint64_t>, std::string> labels;
  for (std::size_t k = 0; k < count; ++k) {
    auto [it, inserted] = labels.try_emplace(grounds[k].states, "");
    if (inserted) it->second = region_label(labels.size() - 1);
    diagram.cells[k].region_id = it->second;
  }
  diagram.num_regions = labels.size();
  return diagram;
}

}  // namespace fqaoa
