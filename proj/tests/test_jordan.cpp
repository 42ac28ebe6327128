#include "doctest.h"

#include <cmath>
#include <random>

#include "ptspec/basis.hpp"
#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"
#include "ptspec/jordan.hpp"
#include "ptspec/spectrum.hpp"

using namespace ptspec;

namespace {

// z2 d/dz1 on normalized monomials z1^h z2^(m-h) / sqrt(h! (m-h)!), read off
// coefficient by coefficient with factorials.
Eigen::MatrixXd monomial_oracle(int m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int h = 1; h <= m; ++h) {
    const double log_norm_in = -0.5 * (std::lgamma(h + 1.0) + std::lgamma(m - h + 1.0));
    const double log_norm_out = -0.5 * (std::lgamma(h) + std::lgamma(m - h + 2.0));
    d(h - 1, h) = h * std::exp(log_norm_in - log_norm_out);
  }
  return d;
}

}  // namespace

TEST_CASE("D_m examples") {
  const auto d1 = dm_matrix(1).entries();
  CHECK(d1(0, 1) == Complex(1.0, 0.0));
  CHECK(d1(0, 0) == Complex(0.0, 0.0));
  CHECK(d1(1, 0) == Complex(0.0, 0.0));
  const auto d2 = dm_matrix(2).entries();
  CHECK(d2(0, 1).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(d2(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(dm_matrix(0).dim() == 1);
}

TEST_CASE("D_m against the monomial oracle, nilpotency and persymmetry") {
  for (int m = 0; m <= 30; ++m) {
    const CMatrix d = dm_matrix(m).entries();
    CHECK((d.real() - monomial_oracle(m)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.imag().cwiseAbs().maxCoeff() == 0.0);
    for (int h = 1; h <= m; ++h) CHECK(d(h - 1, h) == d(m - h, m - h + 1));
    if (m > 12) continue;  // exact zero checks on integers-ish entries only
    CMatrix power = CMatrix::Identity(m + 1, m + 1);
    for (int k = 0; k < m; ++k) power = power * d;
    CHECK(power.cwiseAbs().maxCoeff() > 0.0);
    power = power * d;
    CHECK(power.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Q(g) blocks") {
  BasisTruncation b(2, 30);
  for (double g : {0.0, 0.5, 1.9, -3.0}) {
    const auto q = build_q(g, b);
    CHECK(has_tag(q.tags(), MatrixTag::block_graded));
    for (int m = 0; m <= 30; ++m) {
      const auto [lo, hi] = b.grade_range(m);
      const auto n = static_cast<Eigen::Index>(hi - lo);
      const CMatrix block = q.entries().block(lo, lo, n, n);
      const CMatrix oracle = m * CMatrix::Identity(n, n) + Complex(0.0, g) * dm_matrix(m).entries();
      CHECK((block - oracle).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(std::abs(block.trace() - Complex(m * (m + 1.0), 0.0)) < 1e-12);
    }
    // Exactly zero between grades.
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b.state(i).grade() != b.state(j).grade()) REQUIRE(q(i, j) == Complex(0.0, 0.0));
  }
  CHECK_THROWS_AS(build_q(1.0, BasisTruncation(3, 4)), Error);
}

TEST_CASE("jordan reports") {
  auto r0 = jordan_report(0, 0.7);
  CHECK(r0.eigenvalue_h == 1);
  CHECK(r0.geometric_multiplicity == 1);
  CHECK(r0.nilpotency_index == 1);

  auto r = jordan_report(3, 0.5);
  CHECK(r.eigenvalue_q == 3);
  CHECK(r.eigenvalue_h == 4);
  CHECK(r.geometric_multiplicity == 1);
  CHECK(r.nilpotency_index == 4);
  CHECK(r.residual_nilpotent <= 1e-8);
  CHECK(r.residual_block_leak == 0.0);

  auto z = jordan_report(3, 0.0);
  CHECK(z.geometric_multiplicity == 4);
  CHECK(z.nilpotency_index == 1);

  for (int m = 0; m <= 12; ++m) {
    const auto rep = jordan_report(m, 1.3);
    CHECK(rep.geometric_multiplicity >= 1);
    CHECK(rep.geometric_multiplicity <= m + 1);
    CHECK(rep.nilpotency_index >= 1);
    CHECK(rep.nilpotency_index <= m + 1);
    CHECK(rep.residual_nilpotent >= 0.0);
  }
}

TEST_CASE("rank ambiguity is a hard error") {
  // With g = 1e-10 the nonzero singular values sit right at the threshold.
  try {
    (void)jordan_report(4, 1e-10, 1e-10);
    FAIL("ambiguous rank accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::tolerance_ambiguity);
  }
}

TEST_CASE("eigenvector of the Jordan block") {
  CHECK(eigvec_check(0, 1.0) == 0.0);
  CHECK(eigvec_check(5, 1.9) <= 1e-12);
  for (double g : {0.3, 1.0, 1.9})
    CHECK(eigvec_check(5, g, 1) == doctest::Approx(std::abs(g) * std::sqrt(5.0)));
}

TEST_CASE("symbol bound") {
  CHECK(symbol_bound_check(0.0, 1000, 10.0) == doctest::Approx(0.0));
  for (double g : {0.5, 1.0, 1.5, 1.9}) CHECK(symbol_bound_check(g, 20000, 10.0, 7) >= 0.0);
  CHECK(symbol_bound_check(1.0, 500, 3.0, 11) == symbol_bound_check(1.0, 500, 3.0, 11));
  CHECK_THROWS_AS(symbol_bound_check(2.0, 10, 1.0), Error);

  // x = (1, 1), xi = 0 sits on |sigma_tilde| = sigma_0 / 2.
  const PhasePoint p{1.0, 1.0, 0.0, 0.0};
  CHECK(std::abs(symbol_sigma_tilde(p)) == doctest::Approx(symbol_sigma0(p) / 2.0));
  CHECK(symbol_margin(p, 0.0) == doctest::Approx(0.0));

  // Pointwise bound from |sigma_tilde| <= sigma_0 / 2 on random points.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 2000; ++i) {
    const PhasePoint q{n01(rng), n01(rng), n01(rng), n01(rng)};
    CHECK(std::abs(symbol_sigma_tilde(q)) <= symbol_sigma0(q) / 2.0 + 1e-12);
  }
}

TEST_CASE("dense spectrum of the Jordan example clusters at integers") {
  BasisTruncation b(2, 8);
  const auto q = build_q(0.8, b);
  const CMatrix h = q.entries() + CMatrix::Identity(q.entries().rows(), q.entries().cols());
  const auto ev = dense_spectrum(h);
  for (int m = 0; m <= 8; ++m) {
    Complex sum = 0.0;
    int count = 0;
    for (auto z : ev)
      if (std::abs(z.real() - (m + 1)) < 0.5) {
        sum += z;
        ++count;
      }
    CHECK(count == m + 1);
    CHECK(std::abs(sum / double(count) - Complex(m + 1, 0.0)) < 1e-8);
  }
}
