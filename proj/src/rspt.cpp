#include "ptspec/rspt.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"

namespace ptspec {

namespace {

Eigen::VectorXd power_of(const Eigen::VectorXd& d, int k) {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(d.size());
  for (int i = 0; i < k; ++i) out = out.cwiseProduct(d);
  return out;
}

OperatorMatrix diag_operator(const Eigen::VectorXd& d, const std::string& basis_ref) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  m.diagonal() = d.cast<Complex>();
  return OperatorMatrix(std::move(m), basis_ref, MatrixTag::diagonal | MatrixTag::real_symmetric);
}

void compositions_rec(int remaining, int slots, std::vector<int>& cur,
                      std::vector<StringSpec>& out) {
  if (slots == 1) {
    cur.push_back(remaining);
    out.push_back({cur});
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur.push_back(k);
    compositions_rec(remaining - k, slots - 1, cur, out);
    cur.pop_back();
  }
}

// A string with a zero exponent at position z factors through the cluster:
// S^(k_1) V ... V [-P] V ... V S^(k_{n+1}) = -(left E)(E^T right).
struct Factored {
  Eigen::MatrixXcd left;   // N x m
  Eigen::MatrixXcd right;  // m x N
};

Factored factor_string(const ClusterOperators& ops, const CMatrix& v, const StringSpec& spec) {
  const auto& k = spec.exponents;
  const auto z = static_cast<std::size_t>(std::find(k.begin(), k.end(), 0) - k.begin());
  require(z < k.size(), "string has no zero exponent");
  const Eigen::MatrixXcd e = ops.embedding();
  Factored f{e, e.transpose()};
  for (std::size_t j = z; j-- > 0;) {
    f.left = v * f.left;
    f.left = ops.s_power_diag(k[j]).cast<Complex>().asDiagonal() * f.left;
  }
  for (std::size_t j = z + 1; j < k.size(); ++j) {
    f.right = f.right * v;
    f.right = f.right * ops.s_power_diag(k[j]).cast<Complex>().asDiagonal();
  }
  return f;
}

void check_v(const ClusterOperators& ops, const CMatrix& v) {
  if (v.rows() != ops.dim() || v.cols() != ops.dim())
    fail(ErrorKind::dimension, "perturbation does not match the cluster basis");
}

int cluster_parity(const Cluster& c) {
  require(c.parity != ParityTag::mixed, "parity routing needs a parity-pure cluster");
  return c.parity == ParityTag::even ? 1 : -1;
}

}  // namespace

int ClusterOperators::top_grade(const BasisTruncation& basis) const {
  int top = 0;
  for (auto i : members) top = std::max(top, basis.state(static_cast<std::size_t>(i)).grade());
  return top;
}

OperatorMatrix ClusterOperators::p_r() const { return diag_operator(p_diag, basis_ref); }

Eigen::VectorXd ClusterOperators::s_power_diag(int k) const {
  require(k >= 0, "resolvent power must be >= 0");
  if (k == 0) return -p_diag;
  return power_of(s_diag, k);
}

OperatorMatrix ClusterOperators::s_power(int k) const { return diag_operator(s_power_diag(k), basis_ref); }
OperatorMatrix ClusterOperators::s_plus() const { return diag_operator(s_plus_diag, basis_ref); }
OperatorMatrix ClusterOperators::s_minus() const { return diag_operator(s_minus_diag, basis_ref); }

Eigen::MatrixXcd ClusterOperators::embedding() const {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim(), multiplicity());
  for (Eigen::Index c = 0; c < multiplicity(); ++c) e(members[static_cast<std::size_t>(c)], c) = 1.0;
  return e;
}

ClusterOperators cluster_operators(const FrequencyVector& freqs, const BasisTruncation& basis,
                                   const Cluster& cluster) {
  const auto levels = h0_levels(freqs, basis);
  ClusterOperators ops;
  ops.cluster = cluster;
  ops.basis_ref = basis.id();
  for (const auto& m : cluster.members) {
    if (!basis.contains(m))
      fail(ErrorKind::invalid_argument, "cluster member " + to_string(m) + " lies outside " + basis.id());
    if (freqs.level(m) != cluster.level)
      fail(ErrorKind::invalid_argument, "cluster member " + to_string(m) + " is not at level " +
                                            to_string(cluster.level));
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  ops.p_diag = Eigen::VectorXd::Zero(n);
  ops.s_diag = Eigen::VectorXd::Zero(n);
  ops.s_plus_diag = Eigen::VectorXd::Zero(n);
  ops.s_minus_diag = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& state = basis.state(static_cast<std::size_t>(i));
    const Rational diff = levels[static_cast<std::size_t>(i)] - cluster.level;
    if (diff == Rational(0)) {
      if (std::find(cluster.members.begin(), cluster.members.end(), state) == cluster.members.end())
        fail(ErrorKind::invalid_argument, "state " + to_string(state) +
                                              " shares the cluster level but is not a member");
      ops.p_diag(i) = 1.0;
      ops.members.push_back(i);
      continue;
    }
    const double s = -1.0 / (freqs.omega() * to_double(diff));
    ops.s_diag(i) = s;
    (parity_of(state) > 0 ? ops.s_plus_diag : ops.s_minus_diag)(i) = s;
  }
  require(!ops.members.empty(), "cluster has no members in the basis");
  return ops;
}

std::vector<StringSpec> compositions(int n) {
  require(n >= 0, "string length must be >= 0");
  std::vector<StringSpec> out;
  std::vector<int> cur;
  compositions_rec(n, n + 1, cur, out);
  return out;
}

CMatrix string_product(const ClusterOperators& ops, const CMatrix& v, const StringSpec& spec) {
  check_v(ops, v);
  const auto& k = spec.exponents;
  require(!k.empty(), "string needs at least one resolvent factor");
  if (std::find(k.begin(), k.end(), 0) == k.end()) {
    // no projection factor to split at: plain dense product
    CMatrix m = ops.s_power_diag(k[0]).cast<Complex>().asDiagonal();
    for (std::size_t j = 1; j < k.size(); ++j)
      m = (m * v) * ops.s_power_diag(k[j]).cast<Complex>().asDiagonal();
    return m;
  }
  const Factored f = factor_string(ops, v, spec);
  return -(f.left * f.right);
}

CMatrix string_product_routed(const ClusterOperators& ops, const CMatrix& v,
                              const StringSpec& spec) {
  check_v(ops, v);
  const int pi = cluster_parity(ops.cluster);
  const Eigen::MatrixXcd e = ops.embedding();
  Eigen::MatrixXcd m = e;
  int parity = pi;
  const auto& k = spec.exponents;
  for (std::size_t j = k.size(); j-- > 0;) {
    if (k[j] == 0) {
      m = (-ops.p_diag).cast<Complex>().asDiagonal() * m;
      parity = pi;
    } else {
      const Eigen::VectorXd& half = parity > 0 ? ops.s_plus_diag : ops.s_minus_diag;
      m = power_of(half, k[j]).cast<Complex>().asDiagonal() * m;
    }
    if (j > 0) {
      m = v * m;
      parity = -parity;
    }
  }
  return m * e.transpose();
}

CMatrix pn(const ClusterOperators& ops, const CMatrix& v, int n) {
  check_v(ops, v);
  require(n >= 0, "order must be >= 0");
  CMatrix sum = CMatrix::Zero(ops.dim(), ops.dim());
  // P^(n) = -sum strings, and each string is -(left)(right).
  for (const auto& spec : compositions(n)) {
    const Factored f = factor_string(ops, v, spec);
    sum.noalias() += f.left * f.right;
  }
  return sum;
}

CMatrix tn_hat(const std::vector<CMatrix>& p, const CMatrix& h0, const CMatrix& v, int n) {
  require(n >= 0 && static_cast<std::size_t>(n) < p.size(), "missing projection coefficients");
  CMatrix t = CMatrix::Zero(h0.rows(), h0.cols());
  for (int q = 0; q <= n; ++q) {
    const double sign = q % 2 == 0 ? 1.0 : -1.0;
    t += sign * p[static_cast<std::size_t>(q)] * h0 * p[static_cast<std::size_t>(n - q)];
    if (q < n) t += sign * p[static_cast<std::size_t>(q)] * v * p[static_cast<std::size_t>(n - 1 - q)];
  }
  return t;
}

PerturbationSeries series(const ClusterOperators& ops, const CMatrix& h0, const CMatrix& v,
                          int order, int exact_through) {
  require(order >= 0, "order must be >= 0");
  check_v(ops, v);
  PerturbationSeries s;
  s.order = order;
  s.cluster = ops.cluster;
  s.ops = ops;
  s.exact_through = std::clamp(exact_through, 0, order);
  const Eigen::MatrixXcd e = ops.embedding();
  const auto m = static_cast<Eigen::Index>(ops.multiplicity());

  std::vector<Eigen::MatrixXcd> pe, ep;  // P^(p) E and E^T P^(p)
  for (int q = 0; q <= order; ++q) {
    s.p_matrices.push_back(pn(ops, v, q));
    pe.push_back(s.p_matrices.back() * e);
    ep.push_back(e.transpose() * s.p_matrices.back());
  }
  for (int n = 0; n <= order; ++n) {
    CMatrix b = CMatrix::Zero(m, m), gram = CMatrix::Zero(m, m);
    CMatrix a = CMatrix::Zero(m, m), k = CMatrix::Zero(m, m);
    for (int q = 0; q <= n; ++q) {
      const double sign = q % 2 == 0 ? 1.0 : -1.0;
      const auto& left = ep[static_cast<std::size_t>(q)];
      const CMatrix h0_term = left * h0 * pe[static_cast<std::size_t>(n - q)];
      b += sign * h0_term;
      a += h0_term;
      if (q < n) {
        const CMatrix v_term = left * v * pe[static_cast<std::size_t>(n - 1 - q)];
        b += sign * v_term;
        a += v_term;
      }
      gram += sign * left * pe[static_cast<std::size_t>(n - q)];
    }
    k = ep[static_cast<std::size_t>(n)] * e;
    s.b_matrices.push_back(std::move(b));
    s.gram_matrices.push_back(std::move(gram));
    s.a_matrices.push_back(std::move(a));
    s.k_matrices.push_back(std::move(k));
  }

  // K^{1/2} = Z and its inverse Y, order by order (Z^(0) = Y^(0) = I).
  std::vector<CMatrix> z{CMatrix::Identity(m, m)}, y{CMatrix::Identity(m, m)};
  for (int n = 1; n <= order; ++n) {
    CMatrix zn = s.k_matrices[static_cast<std::size_t>(n)];
    for (int k = 1; k < n; ++k) zn -= z[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(n - k)];
    z.push_back(0.5 * zn);
    CMatrix yn = CMatrix::Zero(m, m);
    for (int k = 1; k <= n; ++k) yn -= z[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(n - k)];
    y.push_back(std::move(yn));
  }
  for (int n = 0; n <= order; ++n) {
    CMatrix gn_ = CMatrix::Zero(m, m);
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b)
        gn_ += y[static_cast<std::size_t>(a)] * s.a_matrices[static_cast<std::size_t>(b)] *
               y[static_cast<std::size_t>(n - a - b)];
    s.g_matrices.push_back(std::move(gn_));
  }
  return s;
}

int exactness_window(int top_grade, int reach, int n_max) {
  if (top_grade > n_max) return -1;
  if (reach <= 0) return std::numeric_limits<int>::max();
  return (n_max - top_grade) / reach;
}

PerturbationSeries series(const AssembledProblem& problem, const Cluster& cluster, int order) {
  const auto ops = cluster_operators(problem.freqs(), problem.basis(), cluster);
  PerturbationSeries s = series(ops, problem.h0().entries(), problem.v(), order, order);
  s.omega = problem.freqs().omega();
  if (auto reach = problem.potential().reach()) {
    s.exact_through = std::clamp(exactness_window(ops.top_grade(problem.basis()), *reach, problem.n_max()), 0, order);
    return s;
  }
  const AssembledProblem bigger = problem.with_n_max(problem.n_max() + 4);
  const auto ops2 = cluster_operators(bigger.freqs(), bigger.basis(), cluster);
  const PerturbationSeries s2 = series(ops2, bigger.h0().entries(), bigger.v(), order, order);
  s.exact_through = 0;
  for (int n = 1; n <= order; ++n) {
    const auto& a = s.g_matrices[static_cast<std::size_t>(n)];
    const auto& b = s2.g_matrices[static_cast<std::size_t>(n)];
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if ((a - b).cwiseAbs().maxCoeff() > 1e-9 * scale) break;
    s.exact_through = n;
  }
  return s;
}

const CMatrix& gn(const PerturbationSeries& s, int n) {
  require(n >= 0 && n <= s.order, "order outside the computed series");
  return s.g_matrices[static_cast<std::size_t>(n)];
}

std::vector<Complex> series_eigenvalues(const PerturbationSeries& s, double g) {
  CMatrix b = CMatrix::Zero(s.g_matrices.front().rows(), s.g_matrices.front().cols());
  double gp = 1.0;
  for (const auto& gm : s.g_matrices) {
    b += gp * gm;
    gp *= g;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(b, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "series eigensolve failed");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

std::vector<CMatrix> similarity_coefficients(const PerturbationSeries& s) {
  // Carried as U^(k) E (N x m): the recursion is linear, so it can act on
  // the cluster columns directly.
  const Eigen::MatrixXcd e = s.ops.embedding();
  std::vector<CMatrix> u{e};
  for (int k = 1; k <= s.order; ++k) {
    CMatrix uk = s.p_matrices[static_cast<std::size_t>(k)] * e;
    for (int j = 1; j < k; ++j)
      uk += (static_cast<double>(k - j) / k) * (s.p_matrices[static_cast<std::size_t>(k - j)] * u[static_cast<std::size_t>(j)]);
    u.push_back(std::move(uk));
  }
  return u;
}

namespace {

CMatrix frame_at(const PerturbationSeries& s, double g) {
  const auto u = similarity_coefficients(s);
  CMatrix f = CMatrix::Zero(u.front().rows(), u.front().cols());
  double gp = 1.0;
  for (const auto& uk : u) {
    f += gp * uk;
    gp *= g;
  }
  return f;
}

}  // namespace

OperatorMatrix similarity_u(const PerturbationSeries& s, double g) {
  return OperatorMatrix(frame_at(s, g) * s.ops.embedding().transpose(), s.ops.basis_ref);
}

CMatrix x_matrix(const PerturbationSeries& s, const CMatrix& h, double g) {
  CMatrix q = frame_at(s, g);
  if (h.rows() != q.rows()) fail(ErrorKind::dimension, "H(g) does not match the series basis");
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index p = 0; p < c; ++p) q.col(c) -= q.col(p).dot(q.col(c)) * q.col(p);
    const double pivot = q.col(c).norm();
    if (pivot < 1e-10)
      fail(ErrorKind::degenerate_frame, "Gram-Schmidt pivot " + std::to_string(pivot) +
                                            " below 1e-10 at column " + std::to_string(c));
    q.col(c) /= pivot;
  }
  CMatrix pg = CMatrix::Zero(h.rows(), h.cols());
  double gp = 1.0;
  for (const auto& p : s.p_matrices) {
    pg += gp * p;
    gp *= g;
  }
  return q.adjoint() * h * (pg * q);
}

}  // namespace ptspec
