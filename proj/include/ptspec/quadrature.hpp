#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ptspec {

/// Gauss-Hermite rule for weight exp(-x^2). `scaled_weights` are
/// w_i exp(x_i^2), to be paired with Hermite functions (which carry the
/// Gaussian themselves) so that sum_i W_i psi_j(x_i) psi_l(x_i) f(x_i)
/// approximates the integral of psi_j psi_l f.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> scaled_weights;
};

GaussHermiteRule gauss_hermite(int order);

/// Normalized Hermite functions psi_0..psi_n_max at x; row n, column point.
Eigen::MatrixXd hermite_functions(int n_max, const std::vector<double>& x);

}  // namespace ptspec
