#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptspec/basis.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/operator_matrix.hpp"

namespace ptspec {

struct PolynomialTerm {
  double coeff = 0.0;
  std::vector<int> powers;
  bool operator==(const PolynomialTerm&) const = default;
};

enum class TrigKind { sin, cos };

/// One factor f(freq * x_mode) of a trig product; mode is 1-based.
struct TrigFactor {
  TrigKind fn = TrigKind::sin;
  int mode = 1;
  double freq = 1.0;
  bool operator==(const TrigFactor&) const = default;
};

/// Builtin bounded potentials:
///   sin_linear:   sin(c . x)
///   tanh_linear:  tanh(c . x)
///   trig_product: prod_j f_j(freq_j x_{mode_j}), f in {sin, cos}
///   sin1_cos2:    alias of trig_product sin(x_1) cos(2 x_2)
struct BuiltinPotential {
  std::string name;
  std::vector<double> coeffs;
  std::vector<TrigFactor> factors;
  bool operator==(const BuiltinPotential&) const = default;
};

class PotentialSpec {
 public:
  enum class Kind { polynomial, builtin };

  static PotentialSpec polynomial(std::vector<PolynomialTerm> terms);
  static PotentialSpec builtin(BuiltinPotential b, std::optional<double> sup_norm = std::nullopt);

  /// Parses either the JSON form or the compact CLI form
  /// ("sin_linear:1,1", "sin1_cos2", "trig:sin1@1,cos2@2", "tanh_linear:1,0",
  /// "poly:1@1,0;0.5@3,0").
  static PotentialSpec parse(std::string_view text);
  static PotentialSpec from_json(std::string_view json);
  std::string to_json() const;

  Kind kind() const { return kind_; }
  const std::vector<PolynomialTerm>& terms() const { return terms_; }
  const BuiltinPotential& builtin_data() const { return builtin_; }

  /// Sup norm, or nullopt for unbounded (polynomial) potentials.
  std::optional<double> sup_norm() const { return sup_norm_; }

  /// Smallest ambient dimension the potential needs.
  int min_dim() const;
  /// Max total degree for polynomials (how many quanta one application moves).
  std::optional<int> reach() const;

  double evaluate(std::span<const double> x) const;

  /// Builtins declare their parity; this is what the declaration says.
  bool declared_odd() const;

  bool operator==(const PotentialSpec&) const = default;

 private:
  Kind kind_ = Kind::polynomial;
  std::vector<PolynomialTerm> terms_;
  BuiltinPotential builtin_;
  std::optional<double> sup_norm_;
};

/// Verifies W(-x) = -W(x). Polynomials: every term must have odd total degree.
/// Builtins: declaration must say odd, and |W(x) + W(-x)| <= 1e-12 at
/// `samples` seeded random points in [-5, 5]^d. Throws
/// Error(oddness_violation) naming the term or sample point.
void validate_oddness(const PotentialSpec& spec, int d, std::uint64_t seed = 0, int samples = 256);

struct PotentialOptions {
  /// 0 selects the default 2 n_max + 8.
  int quad_order = 0;
  /// Mode frequencies omega_k; empty means unit frequencies.
  std::vector<double> mode_frequencies;
  std::uint64_t seed = 0;
  /// Rebuild at 2 quad_order and record the drift.
  bool doubling_check = true;
};

struct PotentialMatrix {
  OperatorMatrix matrix;
  /// max |W(2q) - W(q)| from the doubling self-check (0 for polynomials).
  double quadrature_drift = 0.0;
  /// Drift exceeded 1e-10.
  bool quadrature_warning = false;
  int quad_order = 0;
};

/// <psi_j, W psi_l> in the product eigenbasis of H0. Polynomials are exact
/// (ladder algebra); builtins use tensorized Gauss-Hermite quadrature. Entries
/// between states of equal parity are exactly zero.
PotentialMatrix potential_matrix(const BasisTruncation& basis, const PotentialSpec& spec,
                                 const PotentialOptions& options = {});

/// Generic tensor-grid quadrature of an arbitrary real function. Cost grows as
/// order^d, so this is meant for small d; the potential builder uses a
/// separable route where it can.
CMatrix quadrature_matrix(const BasisTruncation& basis,
                          const std::function<double(std::span<const double>)>& fn, int order,
                          const std::vector<double>& mode_frequencies = {});

}  // namespace ptspec
