#include "ptspec/operator_matrix.hpp"

#include <cmath>

#include "ptspec/error.hpp"

namespace ptspec {

OperatorMatrix::OperatorMatrix(CMatrix entries, std::string basis_ref, MatrixTag tags)
    : entries_(std::move(entries)), basis_ref_(std::move(basis_ref)), tags_(tags) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    fail(ErrorKind::dimension, "operator matrix must be square and nonempty");
  if (!entries_.allFinite()) fail(ErrorKind::numerical, "operator matrix has non-finite entries");

  const double scale = max_abs();
  const double tol = 1e-12 * scale;
  if (has_tag(tags_, MatrixTag::real_symmetric)) {
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    const double imag = entries_.imag().cwiseAbs().maxCoeff();
    if (asym > tol || imag > tol)
      fail(ErrorKind::inconsistency, "matrix tagged real-symmetric is not");
  }
  if (has_tag(tags_, MatrixTag::diagonal)) {
    CMatrix off = entries_;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0)
      fail(ErrorKind::inconsistency, "matrix tagged diagonal has off-diagonal entries");
  }
}

double OperatorMatrix::max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

std::vector<std::string> OperatorMatrix::tag_names() const {
  std::vector<std::string> names;
  if (has_tag(tags_, MatrixTag::real_symmetric)) names.emplace_back("real-symmetric");
  if (has_tag(tags_, MatrixTag::diagonal)) names.emplace_back("diagonal");
  if (has_tag(tags_, MatrixTag::block_graded)) names.emplace_back("block-graded");
  return names;
}

void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.basis_ref() != b.basis_ref() || a.dim() != b.dim())
    fail(ErrorKind::dimension,
         "basis mismatch: " + a.basis_ref() + " vs " + b.basis_ref());
}

OperatorMatrix adjoint(const OperatorMatrix& m) {
  MatrixTag keep = MatrixTag::none;
  if (has_tag(m.tags(), MatrixTag::diagonal)) keep = keep | MatrixTag::diagonal;
  if (has_tag(m.tags(), MatrixTag::real_symmetric)) keep = keep | MatrixTag::real_symmetric;
  return OperatorMatrix(m.entries().adjoint(), m.basis_ref(), keep);
}

}  // namespace ptspec
