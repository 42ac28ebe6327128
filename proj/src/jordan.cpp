#include "ptspec/jordan.hpp"

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"

namespace ptspec {

OperatorMatrix build_q(double g, const BasisTruncation& basis) {
  if (basis.d() != 2)
    fail(ErrorKind::dimension, "Q(g) is defined on d = 2, basis has d = " + std::to_string(basis.d()));
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix q = CMatrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto& s = basis.state(static_cast<std::size_t>(col));
    q(col, col) = s.grade();
    // a2* a1 |n1, n2> = sqrt(n1 (n2 + 1)) |n1 - 1, n2 + 1>, same grade.
    if (s[0] > 0) {
      const MultiIndex t({s[0] - 1, s[1] + 1});
      const double amp = std::sqrt(static_cast<double>(s[0]) * (s[1] + 1));
      q(static_cast<Eigen::Index>(basis.index_of(t)), col) = Complex(0.0, g * amp);
    }
  }
  return OperatorMatrix(std::move(q), basis.id(), MatrixTag::block_graded);
}

OperatorMatrix dm_matrix(int m) {
  require(m >= 0, "m must be >= 0");
  CMatrix d = CMatrix::Zero(m + 1, m + 1);
  for (int h = 1; h <= m; ++h) d(h - 1, h) = std::sqrt(static_cast<double>(h) * (m - h + 1));
  return OperatorMatrix(std::move(d), "grade-block(m=" + std::to_string(m) + ")");
}

JordanBlockReport jordan_report(const OperatorMatrix& q, const BasisTruncation& basis, int m,
                                double g, double rank_tol) {
  require(m >= 0 && m <= basis.n_max(), "grade m outside the truncation");
  require(rank_tol > 0.0, "rank_tol must be positive");
  const auto [lo, hi] = basis.grade_range(m);
  const auto first = static_cast<Eigen::Index>(lo);
  const auto size = static_cast<Eigen::Index>(hi - lo);

  JordanBlockReport r;
  r.m = m;
  r.g = g;
  r.rank_tol = rank_tol;

  const CMatrix& all = q.entries();
  for (Eigen::Index j = first; j < first + size; ++j)
    for (Eigen::Index i = 0; i < all.rows(); ++i)
      if (i < first || i >= first + size) {
        r.residual_block_leak = std::max(r.residual_block_leak, std::abs(all(i, j)));
        r.residual_block_leak = std::max(r.residual_block_leak, std::abs(all(j, i)));
      }

  const CMatrix block = all.block(first, first, size, size);
  // Upper triangular by construction: the spectrum is the diagonal.
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < i; ++j)
      if (block(i, j) != Complex(0.0))
        fail(ErrorKind::inconsistency, "grade block is not upper triangular");
    if (block(i, i) != Complex(m, 0.0))
      fail(ErrorKind::inconsistency, "grade block diagonal differs from m");
  }
  r.eigenvalue_q = m;
  r.eigenvalue_h = m + 1;

  const CMatrix nil = block - Complex(m, 0.0) * CMatrix::Identity(size, size);
  const double block_norm = Eigen::JacobiSVD<CMatrix>(block).singularValues()(0);
  const double threshold = rank_tol * block_norm;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(nil).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (threshold > 0.0 && s > threshold / 10.0 && s < threshold * 10.0)
      fail(ErrorKind::tolerance_ambiguity,
           "singular value " + std::to_string(s) + " of the grade-" + std::to_string(m) +
               " nilpotent part is within a factor 10 of the rank threshold " +
               std::to_string(threshold));
    if (s > threshold) ++rank;
  }
  r.geometric_multiplicity = static_cast<int>(size) - rank;

  const double nil_norm = sv.size() ? sv(0) : 0.0;
  CMatrix power = nil;
  r.nilpotency_index = static_cast<int>(size);
  for (int k = 1; k <= size; ++k) {
    if (k > 1) power = power * nil;
    const double pk = k == 1 ? nil_norm : Eigen::JacobiSVD<CMatrix>(power).singularValues()(0);
    if (pk <= rank_tol * std::pow(nil_norm, k)) {
      r.nilpotency_index = k;
      break;
    }
  }
  // (Q_m - m I)^(m+1): exactly zero for a strictly upper triangular block.
  CMatrix top = CMatrix::Identity(size, size);
  for (int k = 0; k < size; ++k) top = top * nil;
  r.residual_nilpotent = top.cwiseAbs().maxCoeff();
  return r;
}

JordanBlockReport jordan_report(int m, double g, double rank_tol) {
  require(m >= 0, "m must be >= 0");
  const BasisTruncation basis(2, m);
  return jordan_report(build_q(g, basis), basis, m, g, rank_tol);
}

double eigvec_check(int m, double g, int h) {
  require(m >= 0 && h >= 0 && h <= m, "need 0 <= h <= m");
  const BasisTruncation basis(2, m);
  const OperatorMatrix q = build_q(g, basis);
  CVector f = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  f(static_cast<Eigen::Index>(basis.index_of(MultiIndex({h, m - h})))) = 1.0;
  return (q.entries() * f - static_cast<double>(m) * f).norm();
}

double symbol_sigma0(const PhasePoint& p) {
  return 0.5 * (p.xi1 * p.xi1 + p.xi2 * p.xi2 + p.x1 * p.x1 + p.x2 * p.x2);
}

Complex symbol_sigma_tilde(const PhasePoint& p) {
  return 0.5 * Complex(p.x2, -p.xi2) * Complex(p.x1, p.xi1);
}

Complex symbol_sigma_g(const PhasePoint& p, double g) {
  return symbol_sigma0(p) + Complex(0.0, g) * symbol_sigma_tilde(p);
}

double symbol_margin(const PhasePoint& p, double g) {
  return std::abs(symbol_sigma_g(p, g)) - (1.0 - std::abs(g) / 2.0) * symbol_sigma0(p);
}

double symbol_bound_check(double g, int samples, double radius, std::uint64_t seed) {
  require(std::abs(g) < 2.0, "symbol bound needs |g| < 2");
  require(samples > 0, "samples must be positive");
  require(radius > 0.0, "radius must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    // Uniform in the 4-ball: Gaussian direction, radius ~ U^(1/4).
    double v[4];
    double norm = 0.0;
    for (double& c : v) {
      c = normal(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    const double r = radius * std::pow(unit(rng), 0.25) / (norm > 0.0 ? norm : 1.0);
    const PhasePoint p{v[0] * r, v[1] * r, v[2] * r, v[3] * r};
    worst = std::min(worst, symbol_margin(p, g));
  }
  return worst;
}

}  // namespace ptspec
