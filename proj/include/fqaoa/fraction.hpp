#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "fqaoa/error.hpp"

namespace fqaoa {

// Exact rational with a positive, reduced denominator. Magnetizations are
// sums of +-1 over at most a few million terms, so 64-bit parts suffice.
class Fraction {
 public:
  constexpr Fraction() = default;
  constexpr Fraction(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw ContractViolation("fraction with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  constexpr Fraction operator-() const { return Fraction(-num_, den_); }
  friend constexpr Fraction operator+(const Fraction& a, const Fraction& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    return Fraction(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
  }
  friend constexpr Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
  friend constexpr Fraction operator/(const Fraction& a, std::int64_t k) {
    return Fraction(a.num_, a.den_ * k);
  }

  friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
  friend constexpr auto operator<=>(const Fraction& a, const Fraction& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.str(); }

 private:
  constexpr void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fqaoa
