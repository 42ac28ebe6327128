#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace ptspec {

/// Exact rational number. Unperturbed levels, gaps and cluster labels are
/// carried in this type (in units of the base frequency) so that cluster
/// membership never depends on a floating-point comparison.
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// Parses "p", "p/q" or "-p/q". Throws Error(invalid_argument) on bad input.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace ptspec
