#pragma once

#include <cstdint>

#include "ptspec/basis.hpp"
#include "ptspec/operator_matrix.hpp"

namespace ptspec {

/// Q(g) = N1 + N2 + i g a2* a1 on a d = 2 basis. Grade-m states are ordered
/// (0,m), (1,m-1), ..., (m,0), so the grade-m block is m I + i g D_m.
OperatorMatrix build_q(double g, const BasisTruncation& basis);

/// (m+1)x(m+1) nilpotent with superdiagonal sqrt(h (m - h + 1)), h = 1..m.
OperatorMatrix dm_matrix(int m);

struct JordanBlockReport {
  int m = 0;
  int eigenvalue_q = 0;
  int eigenvalue_h = 1;
  int geometric_multiplicity = 1;
  int nilpotency_index = 1;
  double residual_nilpotent = 0.0;
  double residual_block_leak = 0.0;
  double g = 0.0;
  double rank_tol = 0.0;
};

/// Certifies the grade-m block of Q(g) structurally: eigenvalue from the
/// (triangular) diagonal, rank of Q_m - m I from its singular values, and the
/// least k with ||(Q_m - m I)^k|| <= rank_tol ||Q_m - m I||^k.
/// Throws Error(tolerance_ambiguity) if a singular value lies within a factor
/// 10 of the rank threshold.
JordanBlockReport jordan_report(int m, double g, double rank_tol = 1e-10);

/// Same, reading the block out of an already built Q on `basis`.
JordanBlockReport jordan_report(const OperatorMatrix& q, const BasisTruncation& basis, int m,
                                double g, double rank_tol = 1e-10);

/// ||Q(g) f_{m,h} - m f_{m,h}|| where f_{m,h} is the state (h, m-h).
double eigvec_check(int m, double g, int h = 0);

struct PhasePoint {
  double x1 = 0, x2 = 0, xi1 = 0, xi2 = 0;
};

/// Principal symbols: sigma_0 = (xi1^2 + xi2^2 + x1^2 + x2^2)/2 and
/// sigma_tilde = (x2 - i xi2)(x1 + i xi1)/2; sigma_g = sigma_0 + i g sigma_tilde.
double symbol_sigma0(const PhasePoint& p);
Complex symbol_sigma_tilde(const PhasePoint& p);
Complex symbol_sigma_g(const PhasePoint& p, double g);

/// |sigma_g| - (1 - |g|/2) sigma_0 at one point.
double symbol_margin(const PhasePoint& p, double g);

/// Minimum symbol_margin over `samples` points drawn uniformly from the ball
/// of the given radius in R^4. Requires |g| < 2.
double symbol_bound_check(double g, int samples, double radius, std::uint64_t seed = 0);

}  // namespace ptspec
