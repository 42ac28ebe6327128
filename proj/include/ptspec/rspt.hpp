#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ptspec/basis.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/operator_matrix.hpp"
#include "ptspec/problem.hpp"
#include "ptspec/resonance.hpp"

namespace ptspec {

/// Projection onto one cluster and the reduced resolvent around it.
/// Reduced resolvent convention: S = -sum_{j != r} P_j / (l_j - l_r), so the
/// diagonal of S is -1/(l_j - l_r) off the cluster and 0 on it; S^(0) = -P.
struct ClusterOperators {
  Cluster cluster;
  std::string basis_ref;
  /// Basis positions of the cluster members, in basis order.
  std::vector<Eigen::Index> members;
  /// Diagonal of P_r (1 on members, 0 elsewhere).
  Eigen::VectorXd p_diag;
  /// Diagonal of S^(1), and its split by the parity of the target state.
  Eigen::VectorXd s_diag;
  Eigen::VectorXd s_plus_diag;
  Eigen::VectorXd s_minus_diag;

  Eigen::Index dim() const { return p_diag.size(); }
  int multiplicity() const { return static_cast<int>(members.size()); }
  /// Top grade among the cluster members.
  int top_grade(const BasisTruncation& basis) const;

  OperatorMatrix p_r() const;
  /// Diagonal of S^(k): -P for k = 0, (S^(1))^k for k >= 1.
  Eigen::VectorXd s_power_diag(int k) const;
  OperatorMatrix s_power(int k) const;
  OperatorMatrix s_plus() const;
  OperatorMatrix s_minus() const;
  /// N x m matrix whose columns are the member basis vectors.
  Eigen::MatrixXcd embedding() const;
};

/// Every member of the cluster must be in the basis, and no basis state
/// outside the cluster may share its level.
ClusterOperators cluster_operators(const FrequencyVector& freqs, const BasisTruncation& basis,
                                   const Cluster& cluster);

/// Exponents (k_1, ..., k_{n+1}) of one string.
struct StringSpec {
  std::vector<int> exponents;
  int length() const { return static_cast<int>(exponents.size()) - 1; }
};

/// All compositions of n into n+1 nonnegative parts, lexicographic.
std::vector<StringSpec> compositions(int n);

/// S^(k_1) V S^(k_2) V ... V S^(k_{n+1}).
CMatrix string_product(const ClusterOperators& ops, const CMatrix& v, const StringSpec& spec);

/// The same string applied to the cluster from the right, with every
/// S^(k), k >= 1, replaced by the parity half (S_+ or S_-) matching the
/// vector it acts on. For a parity-pure cluster this equals
/// string_product(...) * P_r.
CMatrix string_product_routed(const ClusterOperators& ops, const CMatrix& v,
                              const StringSpec& spec);

/// n-th coefficient of the projection P(g): -sum over compositions of n of
/// the strings (with S^(0) = -P this gives P^(0) = P).
CMatrix pn(const ClusterOperators& ops, const CMatrix& v, int n);

/// n-th coefficient of P(-g) H(g) P(g):
/// sum_p (-1)^p P^(p) H0 P^(n-p) + sum_{p < n} (-1)^p P^(p) V P^(n-1-p).
CMatrix tn_hat(const std::vector<CMatrix>& p_coeffs, const CMatrix& h0, const CMatrix& v, int n);

struct PerturbationSeries {
  int order = 0;
  Cluster cluster;
  ClusterOperators ops;
  /// Full N x N projection coefficients P^(0..order).
  std::vector<CMatrix> p_matrices;
  /// Cluster compressions of P(-g) H(g) P(g) (raw T-hat coefficients).
  std::vector<CMatrix> b_matrices;
  /// Cluster compressions of the Gram series P(-g) P(g).
  std::vector<CMatrix> gram_matrices;
  /// Bilinear compressions E^T P(g) H(g) P(g) E and overlaps E^T P(g) E.
  /// H is complex symmetric, so both are complex symmetric at every order.
  std::vector<CMatrix> a_matrices;
  std::vector<CMatrix> k_matrices;
  /// Energy-matrix coefficients of K^{-1/2} A K^{-1/2}. This is similar to
  /// H restricted to the perturbed cluster space, complex symmetric, and real
  /// symmetric for parity-pure clusters.
  std::vector<CMatrix> g_matrices;
  int exact_through = 0;
  double omega = 1.0;
};

/// Series on fixed matrices; exact_through is taken as given.
PerturbationSeries series(const ClusterOperators& ops, const CMatrix& h0, const CMatrix& v,
                          int order, int exact_through);

/// Series for a problem. exact_through comes from the truncation window for
/// polynomial W and from an n_max vs n_max + 4 comparison at 1e-9 otherwise.
PerturbationSeries series(const AssembledProblem& problem, const Cluster& cluster, int order);

/// Largest n with top_grade + n * reach <= n_max.
int exactness_window(int top_grade, int reach, int n_max);

/// G^(n) of a computed series.
const CMatrix& gn(const PerturbationSeries& s, int n);

/// Eigenvalues of sum_n g^n G^(n), sorted by real part.
std::vector<Complex> series_eigenvalues(const PerturbationSeries& s, double g);

/// Coefficients U^(k) (k = 0..order) of U(g) P through the recursion
/// k U^(k) = k P^(k) + sum_{j=1}^{k-1} (k - j) P^(k-j) U^(j).
std::vector<CMatrix> similarity_coefficients(const PerturbationSeries& s);

/// U(g) P truncated at the series order.
OperatorMatrix similarity_u(const PerturbationSeries& s, double g);

/// Gram-Schmidt the columns U(g) psi_s and compress H(g) on them.
/// Error(degenerate_frame) if a pivot drops below 1e-10.
CMatrix x_matrix(const PerturbationSeries& s, const CMatrix& h, double g);

}  // namespace ptspec
