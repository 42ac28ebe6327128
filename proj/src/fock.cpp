#include "ptspec/fock.hpp"

#include <cmath>

#include "ptspec/error.hpp"

namespace ptspec {

namespace {

void check_mode(const BasisTruncation& basis, int mode) {
  require(mode >= 1 && mode <= basis.d(),
          "mode " + std::to_string(mode) + " outside 1.." + std::to_string(basis.d()));
}

}  // namespace

OperatorMatrix ladder_matrix(const BasisTruncation& basis, int mode, LadderKind kind) {
  check_mode(basis, mode);
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix a = CMatrix::Zero(n, n);
  const auto k = static_cast<std::size_t>(mode - 1);
  for (std::size_t col = 0; col < basis.size(); ++col) {
    std::vector<int> occ = basis.state(col).occupations();
    double amp = 0.0;
    if (kind == LadderKind::lower) {
      if (occ[k] == 0) continue;
      amp = std::sqrt(static_cast<double>(occ[k]));
      --occ[k];
    } else {
      amp = std::sqrt(static_cast<double>(occ[k] + 1));
      ++occ[k];
    }
    MultiIndex target(std::move(occ));
    if (!basis.contains(target)) continue;
    a(static_cast<Eigen::Index>(basis.index_of(target)), static_cast<Eigen::Index>(col)) = amp;
  }
  return OperatorMatrix(std::move(a), basis.id());
}

OperatorMatrix position_matrix(const BasisTruncation& basis, int mode) {
  const auto lower = ladder_matrix(basis, mode, LadderKind::lower);
  const auto raise = ladder_matrix(basis, mode, LadderKind::raise);
  CMatrix x = (lower.entries() + raise.entries()) / std::sqrt(2.0);
  return OperatorMatrix(std::move(x), basis.id(), MatrixTag::real_symmetric);
}

std::vector<Rational> h0_levels(const FrequencyVector& freqs, const BasisTruncation& basis) {
  if (freqs.d() != basis.d())
    fail(ErrorKind::dimension, "frequency vector has " + std::to_string(freqs.d()) +
                                   " modes, basis has " + std::to_string(basis.d()));
  std::vector<Rational> levels;
  levels.reserve(basis.size());
  for (const auto& s : basis.states()) levels.push_back(freqs.level(s));
  return levels;
}

OperatorMatrix build_h0(const FrequencyVector& freqs, const BasisTruncation& basis) {
  const auto levels = h0_levels(freqs, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix h = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = freqs.omega() * to_double(levels[static_cast<std::size_t>(i)]);
  return OperatorMatrix(std::move(h), basis.id(), MatrixTag::diagonal | MatrixTag::real_symmetric);
}

OperatorMatrix assemble_h(double g, const OperatorMatrix& h0, const OperatorMatrix& w) {
  require_same_basis(h0, w);
  CMatrix h = h0.entries() + Complex(0.0, g) * w.entries();
  return OperatorMatrix(std::move(h), h0.basis_ref());
}

Eigen::VectorXd parity_signature(const BasisTruncation& basis) {
  Eigen::VectorXd pi(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    pi(static_cast<Eigen::Index>(i)) = parity_of(basis.state(i));
  return pi;
}

}  // namespace ptspec
