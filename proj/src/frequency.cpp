#include "ptspec/frequency.hpp"

#include <cmath>

#include "ptspec/error.hpp"

namespace ptspec {

FrequencyVector::FrequencyVector(double omega, std::vector<FrequencyMultiplier> multipliers)
    : omega_(omega), multipliers_(std::move(multipliers)) {
  require(std::isfinite(omega_) && omega_ > 0.0, "omega must be positive");
  require(!multipliers_.empty(), "frequency vector needs at least one mode");
  for (auto& m : multipliers_) {
    require(m.p > 0 && m.q > 0, "frequency multipliers p/q must be positive");
    require(gcd64(m.p, m.q) == 1, "frequency multiplier " + std::to_string(m.p) + "/" +
                                      std::to_string(m.q) + " is not in lowest terms");
  }
}

FrequencyVector FrequencyVector::parse(std::string_view text, double omega) {
  std::vector<FrequencyMultiplier> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto token = text.substr(start, comma - start);
    const Rational r = parse_rational(token);
    if (const auto slash = token.find('/'); slash != std::string_view::npos) {
      const Rational raw = parse_rational(token.substr(0, slash));
      require(std::abs(raw.numerator()) == std::abs(r.numerator()),
              "frequency multiplier '" + std::string(token) + "' is not in lowest terms");
    }
    require(r > 0, "frequency multipliers must be positive: '" + std::string(text) + "'");
    out.push_back({r.numerator(), r.denominator()});
    start = comma + 1;
  }
  return FrequencyVector(omega, std::move(out));
}

Rational FrequencyVector::ratio(int k) const {
  const auto& m = multipliers_.at(static_cast<std::size_t>(k));
  return Rational(m.p, m.q);
}

double FrequencyVector::frequency(int k) const { return omega_ * to_double(ratio(k)); }

Rational FrequencyVector::level(const MultiIndex& state) const {
  require(state.dim() == multipliers_.size(), "state dimension does not match frequencies");
  Rational sum(0);
  for (int k = 0; k < d(); ++k) sum += ratio(k) * Rational(2 * state[static_cast<std::size_t>(k)] + 1, 2);
  return sum;
}

Rational FrequencyVector::zero_point() const {
  Rational sum(0);
  for (int k = 0; k < d(); ++k) sum += ratio(k);
  return sum / 2;
}

std::string FrequencyVector::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < multipliers_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(multipliers_[k].p) + "/" + std::to_string(multipliers_[k].q);
  }
  return s;
}

}  // namespace ptspec
