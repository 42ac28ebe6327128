#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptspec {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class MatrixTag : std::uint8_t {
  none = 0,
  real_symmetric = 1 << 0,
  diagonal = 1 << 1,
  block_graded = 1 << 2,
};

constexpr MatrixTag operator|(MatrixTag a, MatrixTag b) {
  return static_cast<MatrixTag>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
constexpr bool has_tag(MatrixTag set, MatrixTag t) {
  return (static_cast<std::uint8_t>(set) & static_cast<std::uint8_t>(t)) != 0;
}

/// Dense complex matrix tied to the basis it was built on. Tags are claims
/// about structure; they are checked on construction.
class OperatorMatrix {
 public:
  OperatorMatrix(CMatrix entries, std::string basis_ref, MatrixTag tags = MatrixTag::none);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  const std::string& basis_ref() const { return basis_ref_; }
  MatrixTag tags() const { return tags_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  /// Max-abs entry.
  double max_abs() const;

  std::vector<std::string> tag_names() const;

 private:
  CMatrix entries_;
  std::string basis_ref_;
  MatrixTag tags_;
};

/// Throws Error(dimension) unless both matrices live on the same basis.
void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b);

/// Entrywise conjugate transpose.
OperatorMatrix adjoint(const OperatorMatrix& m);

}  // namespace ptspec
