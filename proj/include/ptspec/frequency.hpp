#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ptspec/basis.hpp"
#include "ptspec/rational.hpp"

namespace ptspec {

/// omega_k = omega * p_k / q_k with gcd(p_k, q_k) = 1.
struct FrequencyMultiplier {
  std::int64_t p = 1;
  std::int64_t q = 1;
  bool operator==(const FrequencyMultiplier&) const = default;
};

class FrequencyVector {
 public:
  FrequencyVector(double omega, std::vector<FrequencyMultiplier> multipliers);

  /// Parses "p/q,p/q,..." (a bare "p" means p/1).
  static FrequencyVector parse(std::string_view text, double omega = 1.0);

  int d() const { return static_cast<int>(multipliers_.size()); }
  double omega() const { return omega_; }
  const std::vector<FrequencyMultiplier>& multipliers() const { return multipliers_; }

  /// omega_k / omega as an exact rational.
  Rational ratio(int k) const;
  /// omega_k in energy units.
  double frequency(int k) const;

  /// Unperturbed level sum_k (p_k/q_k)(n_k + 1/2), in units of omega.
  Rational level(const MultiIndex& state) const;
  /// Ground level (1/2) sum_k p_k/q_k, in units of omega.
  Rational zero_point() const;

  std::string to_string() const;
  bool operator==(const FrequencyVector&) const = default;

 private:
  double omega_;
  std::vector<FrequencyMultiplier> multipliers_;
};

}  // namespace ptspec
