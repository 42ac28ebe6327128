#include "ptspec/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ptspec/error.hpp"

namespace ptspec {

namespace {

// psi_{n-1}(x) and psi_n(x) by the three-term recurrence.
std::pair<double, double> hermite_pair(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
  require(order >= 1, "quadrature order must be >= 1");
  // Golub-Welsch for the starting nodes, Newton on psi_n to polish them.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "Golub-Welsch eigensolve failed");

  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.scaled_weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      auto [pm1, p] = hermite_pair(order, x);
      const double dp = std::sqrt(2.0 * order) * pm1 - x * p;
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    const double pm1 = hermite_pair(order, x).first;
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.scaled_weights[static_cast<std::size_t>(i)] = 1.0 / (order * pm1 * pm1);
  }
  // Symmetrize the rule; the exact one is symmetric about 0.
  for (int i = 0; i < order / 2; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(order - 1 - i);
    const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
    const double w = 0.5 * (rule.scaled_weights[a] + rule.scaled_weights[b]);
    rule.nodes[a] = -x;
    rule.nodes[b] = x;
    rule.scaled_weights[a] = rule.scaled_weights[b] = w;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

Eigen::MatrixXd hermite_functions(int n_max, const std::vector<double>& x) {
  const auto npts = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd psi(n_max + 1, npts);
  const double c0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index j = 0; j < npts; ++j) {
    const double xj = x[static_cast<std::size_t>(j)];
    psi(0, j) = c0 * std::exp(-0.5 * xj * xj);
    if (n_max >= 1) psi(1, j) = std::sqrt(2.0) * xj * psi(0, j);
    for (int n = 1; n < n_max; ++n)
      psi(n + 1, j) = std::sqrt(2.0 / (n + 1)) * xj * psi(n, j) -
                      std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1, j);
  }
  return psi;
}

}  // namespace ptspec
