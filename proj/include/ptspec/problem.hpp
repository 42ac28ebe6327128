#pragma once

#include <vector>

#include "ptspec/basis.hpp"
#include "ptspec/fock.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/operator_matrix.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/rational.hpp"

namespace ptspec {

/// H0, W and the basis they live on, built once for a given truncation.
/// The potential is validated for oddness on construction.
class AssembledProblem {
 public:
  AssembledProblem(FrequencyVector freqs, PotentialSpec potential, int n_max,
                   PotentialOptions options = {});

  const FrequencyVector& freqs() const { return freqs_; }
  const PotentialSpec& potential() const { return potential_; }
  const PotentialOptions& options() const { return options_; }
  const BasisTruncation& basis() const { return basis_; }
  int n_max() const { return basis_.n_max(); }
  int d() const { return basis_.d(); }

  const OperatorMatrix& h0() const { return h0_; }
  const OperatorMatrix& w() const { return w_.matrix; }
  /// i W, the perturbation entering H(g) = H0 + g V.
  const CMatrix& v() const { return v_; }
  const PotentialMatrix& potential_build() const { return w_; }
  /// Exact unperturbed levels of each basis state, in units of omega.
  const std::vector<Rational>& levels() const { return levels_; }

  OperatorMatrix h(double g) const;

  /// Same problem on another truncation.
  AssembledProblem with_n_max(int n_max) const;

 private:
  FrequencyVector freqs_;
  PotentialSpec potential_;
  PotentialOptions options_;
  BasisTruncation basis_;
  std::vector<Rational> levels_;
  OperatorMatrix h0_;
  PotentialMatrix w_;
  CMatrix v_;
};

}  // namespace ptspec
