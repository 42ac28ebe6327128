#include "doctest.h"

#include <cmath>

#include "ptspec/basis.hpp"
#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/potential.hpp"

using namespace ptspec;

namespace {

OperatorMatrix w_of(const BasisTruncation& b, const char* text) {
  return potential_matrix(b, PotentialSpec::parse(text)).matrix;
}

}  // namespace

TEST_CASE("graded lexicographic basis") {
  BasisTruncation b(2, 2);
  REQUIRE(b.size() == 6);
  const std::vector<std::vector<int>> expect = {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(b.state(i) == MultiIndex(expect[i]));

  for (int d = 1; d <= 4; ++d)
    for (int n = 0; n <= 8; ++n) {
      BasisTruncation t(d, n);
      CHECK(t.size() == binomial(n + d, d));
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.index_of(t.state(i)) == i);
      for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.state(i - 1) < t.state(i));
    }

  auto [lo, hi] = BasisTruncation(3, 5).grade_range(2);
  CHECK(hi - lo == binomial(4, 2));
  CHECK_FALSE(b.contains(MultiIndex({3, 0})));
  CHECK_THROWS_AS(b.index_of(MultiIndex({3, 0})), Error);
  CHECK_THROWS_AS(BasisTruncation(0, 3), Error);
  CHECK_THROWS_AS(BasisTruncation(2, -1), Error);
}

TEST_CASE("parity of product states") {
  CHECK(parity_of(MultiIndex({0, 0})) == 1);
  CHECK(parity_of(MultiIndex({1, 0})) == -1);
  CHECK(parity_of(MultiIndex({2, 3})) == -1);
  CHECK(parity_of(MultiIndex({2, 2})) == 1);
}

TEST_CASE("ladder operators") {
  BasisTruncation b(1, 6);
  const auto a = ladder_matrix(b, 1, LadderKind::lower).entries();
  const auto ad = ladder_matrix(b, 1, LadderKind::raise).entries();
  for (int n = 1; n <= 6; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(n)));
  CHECK((ad - a.adjoint()).norm() == 0.0);

  const CMatrix number = ad * a;
  for (int n = 0; n <= 6; ++n) CHECK(number(n, n).real() == doctest::Approx(n));
  CHECK_THROWS_AS(ladder_matrix(b, 2, LadderKind::raise), Error);
}

TEST_CASE("truncated commutator defect sits on the top grade") {
  for (int d = 1; d <= 3; ++d) {
    BasisTruncation b(d, 5);
    const auto [top, end] = b.grade_range(5);
    for (int k = 1; k <= d; ++k) {
      const auto a = ladder_matrix(b, k, LadderKind::lower).entries();
      const auto ad = ladder_matrix(b, k, LadderKind::raise).entries();
      const CMatrix defect = a * ad - ad * a - CMatrix::Identity(a.rows(), a.cols());
      const auto n = static_cast<Eigen::Index>(top);
      CHECK(defect.topLeftCorner(n, n).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(defect.bottomRightCorner(a.rows() - n, a.rows() - n).cwiseAbs().maxCoeff() > 0.5);
    }
  }
}

TEST_CASE("position matrix and unperturbed levels") {
  BasisTruncation b(1, 4);
  const auto x = position_matrix(b, 1);
  CHECK(x(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(x(1, 2).real() == doctest::Approx(1.0));
  CHECK(has_tag(x.tags(), MatrixTag::real_symmetric));

  const auto f = FrequencyVector::parse("2/1,1/1");
  BasisTruncation b2(2, 3);
  const auto lv = h0_levels(f, b2);
  CHECK(lv[b2.index_of(MultiIndex({1, 0}))] == Rational(7, 2));
  CHECK(lv[b2.index_of(MultiIndex({0, 2}))] == Rational(7, 2));
  const auto h0 = build_h0(f, b2);
  CHECK(h0(0, 0).real() == 1.5);
  CHECK(has_tag(h0.tags(), MatrixTag::diagonal));
}

TEST_CASE("assembled Hamiltonian") {
  BasisTruncation b(1, 6);
  const auto f = FrequencyVector::parse("1");
  const auto h0 = build_h0(f, b);
  const auto w = w_of(b, "poly:1@1");
  CHECK((assemble_h(0.0, h0, w).entries() - h0.entries()).norm() == 0.0);
  const auto h = assemble_h(1.0, h0, w);
  CHECK(h(0, 1).real() == 0.0);
  CHECK(h(0, 1).imag() == doctest::Approx(1.0 / std::sqrt(2.0)));

  BasisTruncation other(1, 5);
  CHECK_THROWS_AS(assemble_h(1.0, build_h0(f, other), w), Error);
}

TEST_CASE("adjoint relation and PT structure") {
  const auto f = FrequencyVector::parse("1,2");
  BasisTruncation b(2, 8);
  const auto h0 = build_h0(f, b);
  const auto pi = parity_signature(b);
  for (const char* text : {"poly:1@1,0;-0.3@2,1;0.7@0,3", "sin_linear:1,0.5", "trig:sin1@1,cos2@2"}) {
    const auto w = w_of(b, text);
    for (double g : {0.37, -1.2}) {
      const auto h = assemble_h(g, h0, w);
      const auto hm = assemble_h(-g, h0, w);
      CHECK((adjoint(h).entries() - hm.entries()).cwiseAbs().maxCoeff() < 1e-14);
      const CMatrix pt = pi.asDiagonal() * h.entries() * pi.asDiagonal();
      CHECK((h.entries().conjugate() - pt).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("parity selection rule is structural") {
  BasisTruncation b(2, 7);
  for (const char* text : {"poly:1@1,0;0.2@1,2", "sin_linear:1,1", "tanh_linear:0.7,0.4", "sin1_cos2"}) {
    const auto w = w_of(b, text);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (parity_of(b.state(i)) == parity_of(b.state(j))) CHECK(w(i, j) == Complex(0.0, 0.0));
  }
}
