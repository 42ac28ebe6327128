#pragma once

#include <vector>

#include "ptspec/basis.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/operator_matrix.hpp"
#include "ptspec/rational.hpp"

namespace ptspec {

enum class LadderKind { raise, lower };

/// a_mode or a*_mode on the truncated basis (mode is 1-based). Raising out of
/// the truncation contributes zero.
OperatorMatrix ladder_matrix(const BasisTruncation& basis, int mode, LadderKind kind);

/// x_mode = (a + a*)/sqrt(2) for a unit-frequency oscillator.
OperatorMatrix position_matrix(const BasisTruncation& basis, int mode);

/// Exact unperturbed levels of every basis state, in units of omega.
std::vector<Rational> h0_levels(const FrequencyVector& freqs, const BasisTruncation& basis);

/// Diagonal H0 = sum_k omega_k (N_k + 1/2).
OperatorMatrix build_h0(const FrequencyVector& freqs, const BasisTruncation& basis);

/// H(g) = H0 + i g W.
OperatorMatrix assemble_h(double g, const OperatorMatrix& h0, const OperatorMatrix& w);

/// Diagonal parity signature Pi of the basis, entries parity_of(state).
Eigen::VectorXd parity_signature(const BasisTruncation& basis);

}  // namespace ptspec
