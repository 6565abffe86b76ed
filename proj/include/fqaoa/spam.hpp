#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fqaoa/error.hpp"
#include "fqaoa/qaoa.hpp"

namespace fqaoa {

/// Independent readout flips. p01[i] = P(read 1 | true 0) and
/// p10[i] = P(read 0 | true 1) for qubit i.
struct SpamModel {
  std::vector<double> p01;
  std::vector<double> p10;

  int num_qubits() const { return static_cast<int>(p01.size()); }

  static SpamModel uniform(int num_qubits, double q) {
    SpamModel m{std::vector<double>(static_cast<std::size_t>(num_qubits), q),
                std::vector<double>(static_cast<std::size_t>(num_qubits), q)};
    m.validate();
    return m;
  }

  // Symmetric uniform flips q chosen so that (1 - q)^N equals `retention`.
  static SpamModel from_retention(int num_qubits, double retention) {
    if (num_qubits < 1 || !(retention > 0.0) || retention > 1.0)
      throw ContractViolation("retention must be in (0, 1] for at least one qubit");
    return uniform(num_qubits, 1.0 - std::pow(retention, 1.0 / num_qubits));
  }

  void validate() const {
    if (p01.size() != p10.size()) throw ContractViolation("p01 and p10 lists differ in length");
    for (std::size_t i = 0; i < p01.size(); ++i) {
      for (double p : {p01[i], p10[i]})
        if (!(p >= 0.0 && p < 0.5))
          throw ContractViolation("flip probability " + std::to_string(p) + " on qubit " + std::to_string(i) +
                                  " outside [0, 0.5)");
    }
  }
};

namespace detail {

// Applies the 2x2 matrix [[m00, m01], [m10, m11]] along bit `q`.
inline void apply_bit_matrix(std::vector<double>& v, int q, double m00, double m01, double m10, double m11) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < v.size(); base += 2 * stride) {
    for (std::size_t z = base; z < base + stride; ++z) {
      const double x0 = v[z];
      const double x1 = v[z + stride];
      v[z] = m00 * x0 + m01 * x1;
      v[z + stride] = m10 * x0 + m11 * x1;
    }
  }
}

inline void check_width(std::span<const double> dist, const SpamModel& model) {
  model.validate();
  if (dist.size() != (std::size_t{1} << model.num_qubits()))
    throw ContractViolation("distribution length does not match SPAM model width");
}

}  // namespace detail

inline std::vector<double> apply_channel(std::span<const double> dist, const SpamModel& model) {
  detail::check_width(dist, model);
  std::vector<double> out(dist.begin(), dist.end());
  for (int q = 0; q < model.num_qubits(); ++q) {
    const double a = model.p01[q];
    const double b = model.p10[q];
    detail::apply_bit_matrix(out, q, 1.0 - a, b, a, 1.0 - b);
  }
  return out;
}

enum class MitigationVariant { Inverse, Clipped };

inline std::string to_string(MitigationVariant v) { return v == MitigationVariant::Inverse ? "inverse" : "clipped"; }

struct MitigationResult {
  MitigationVariant variant = MitigationVariant::Inverse;
  std::vector<double> distribution;
  // Total magnitude of the negative entries produced by the raw inverse.
  double clamped_mass = 0.0;
};

/// Tensor-factored inverse of the channel. Entries may come out negative;
/// they are left as is and the sum stays 1.
inline MitigationResult mitigate_inverse(std::span<const double> noisy, const SpamModel& model) {
  detail::check_width(noisy, model);
  MitigationResult r;
  r.variant = MitigationVariant::Inverse;
  r.distribution.assign(noisy.begin(), noisy.end());
  for (int q = 0; q < model.num_qubits(); ++q) {
    const double a = model.p01[q];
    const double b = model.p10[q];
    const double det = 1.0 - a - b;
    detail::apply_bit_matrix(r.distribution, q, (1.0 - b) / det, -b / det, -a / det, (1.0 - a) / det);
  }
  for (double p : r.distribution)
    if (p < 0.0) r.clamped_mass -= p;
  return r;
}

// Raw inverse, then negatives set to zero and the rest rescaled to sum to 1.
inline MitigationResult mitigate_clipped(std::span<const double> noisy, const SpamModel& model) {
  MitigationResult r = mitigate_inverse(noisy, model);
  r.variant = MitigationVariant::Clipped;
  double sum = 0.0;
  for (double& p : r.distribution) {
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (!(sum > 0.0)) throw DomainError("mitigated distribution has no positive mass to renormalize");
  for (double& p : r.distribution) p /= sum;
  return r;
}

inline MitigationResult mitigate(std::span<const double> noisy, const SpamModel& model, MitigationVariant v) {
  return v == MitigationVariant::Inverse ? mitigate_inverse(noisy, model) : mitigate_clipped(noisy, model);
}

inline std::vector<double> counts_to_distribution(const ShotCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) throw ContractViolation("cannot form frequencies from zero shots");
  if (counts.num_qubits < 1 || counts.num_qubits > kMaxExhaustiveSpins)
    throw ContractViolation("shot counts width outside [1, 24]");
  std::vector<double> dist(std::size_t{1} << counts.num_qubits, 0.0);
  for (const auto& [z, c] : counts.counts) {
    if (z >= dist.size()) throw ContractViolation("shot outcome outside the register");
    dist[z] = static_cast<double>(c) / static_cast<double>(total);
  }
  return dist;
}

}  // namespace fqaoa
