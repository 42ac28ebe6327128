#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ptspec/error.hpp"
#include "ptspec/fock.hpp"
#include "ptspec/jordan.hpp"
#include "ptspec/problem.hpp"
#include "ptspec/resonance.hpp"
#include "ptspec/spectrum.hpp"

using namespace ptspec;

namespace {

TruncatedBuilder builder_for(const char* freqs, const char* w) {
  const auto f = FrequencyVector::parse(freqs);
  const auto spec = PotentialSpec::parse(w);
  return [=](double g, int n_max) { return AssembledProblem(f, spec, n_max).h(g).entries(); };
}

}  // namespace

TEST_CASE("dense spectrum") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = Complex(2.0, 0.5);
  const auto ev = dense_spectrum(d);
  CHECK(ev[0] == Complex(-1.0, 0.0));
  CHECK(ev[1] == Complex(2.0, 0.5));
  CHECK(ev[2] == Complex(3.0, 0.0));

  const double l = 3.5, g = 0.2, c = 0.3;
  CMatrix two(2, 2);
  two << l, Complex(0, g * c), Complex(0, g * c), l;
  const auto pair = dense_spectrum(two);
  CHECK(std::abs(pair[0] - Complex(l, -g * c)) < 1e-14);
  CHECK(std::abs(pair[1] - Complex(l, g * c)) < 1e-14);

  const auto f = FrequencyVector::parse("1,1");
  BasisTruncation b(2, 6);
  const auto h0 = dense_spectrum(build_h0(f, b));
  for (int level = 1; level <= 7; ++level)
    CHECK(std::count(h0.begin(), h0.end(), Complex(level, 0.0)) == level);

  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(dense_spectrum(bad), Error);
}

TEST_CASE("eigenvalue refinement") {
  const auto p = AssembledProblem(FrequencyVector::parse("1"), PotentialSpec::parse("poly:1@1"), 30);
  const CMatrix h = p.h(0.1).entries();
  const auto ev = dense_spectrum(h);
  const auto refined = refine_eigenvalue(h, ev[0]);
  CHECK(std::abs(static_cast<double>(refined.real()) - 0.505) < 1e-14);
}

TEST_CASE("trust window") {
  const auto build = builder_for("1,1", "sin_linear:1,1");
  const auto w0 = trust_window(build, 0.0, 12);
  CHECK(w0.threshold >= 12 - 4);
  const auto w = trust_window(build, 0.3, 30);
  CHECK(w.threshold >= 10.0);
  CHECK(w.trusted.size() == w.eigenvalues.size());
  for (std::size_t i = 0; i < w.eigenvalues.size(); ++i)
    if (w.trusted[i]) CHECK(w.eigenvalues[i].real() <= w.threshold + 1e-12);
  try {
    (void)trust_window(build, 0.3, 12, 4, 0.0);
    FAIL("zero tolerance accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_window);
  }
  CHECK_THROWS_AS(trust_window(build, 0.3, 4, 4), Error);
}

TEST_CASE("reality scan") {
  const auto f = FrequencyVector::parse("1,1");
  const auto reports = reality_scan(f, PotentialSpec::parse("sin_linear:1,1"), {0.0, 0.3, 0.7}, 20);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].verdict == Verdict::real);
  CHECK(reports[0].max_abs_imag_trusted == 0.0);
  CHECK(reports[0].certified);
  CHECK(reports[1].verdict == Verdict::real);
  CHECK(reports[1].max_abs_imag_trusted < 1e-6);
  CHECK(reports[1].certified);
  // Beyond rho: an observation, not a certificate.
  CHECK_FALSE(reports[2].certified);

  for (const auto& r : reports) {
    // Trusted eigenvalues are sorted and closed under conjugation.
    std::vector<Complex> trusted;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      if (r.trusted_mask[i]) trusted.push_back(r.eigenvalues[i]);
    for (std::size_t i = 1; i < trusted.size(); ++i) CHECK(trusted[i - 1].real() <= trusted[i].real());
    for (auto z : trusted) {
      double best = 1e300;
      for (auto y : r.eigenvalues) best = std::min(best, std::abs(std::conj(z) - y));
      CHECK(best < 1e-8);
    }
  }

  const auto mixed = reality_scan(FrequencyVector::parse("2,1"), PotentialSpec::parse("sin1_cos2"), {0.15}, 20);
  CHECK(mixed[0].verdict == Verdict::complex_pair_found);
  CHECK_FALSE(mixed[0].certified);
  bool near = false;
  for (std::size_t i = 0; i < mixed[0].eigenvalues.size(); ++i) {
    const auto z = mixed[0].eigenvalues[i];
    if (mixed[0].trusted_mask[i] && std::abs(z.real() - 3.5) < 0.1 && std::abs(z.imag()) > 1e-4) near = true;
  }
  CHECK(near);

  // Monotone: a looser imaginary tolerance never turns real into complex.
  ScanOptions loose;
  loose.imag_tol = 1e-2;
  const auto relaxed = reality_scan(f, PotentialSpec::parse("sin_linear:1,1"), {0.3}, 20, loose);
  CHECK(relaxed[0].verdict == Verdict::real);

  try {
    (void)reality_scan(f, PotentialSpec::parse("poly:1@1,0"), {0.1}, 10);
    FAIL("unbounded potential accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unbounded_potential);
  }
}

TEST_CASE("branch tracking") {
  // W = 0: flat branches at the unperturbed levels.
  BasisTruncation b(2, 6);
  const auto h0 = build_h0(FrequencyVector::parse("1,1"), b).entries();
  BranchOptions opt;
  opt.level_cutoff = 3.0;
  const auto flat = branch_track([&](double) { return CMatrix(h0); }, {-0.2, 0.0, 0.2}, opt);
  CHECK(flat.branches.size() == 1 + 2 + 3);
  for (const auto& br : flat.branches)
    for (auto z : br.values) CHECK(z == Complex(br.origin_level, 0.0));
  CHECK(flat.candidates.empty());

  // Jordan example: every branch stays at its integer.
  BasisTruncation bq(2, 6);
  const auto jordan = branch_track(
      [&](double g) {
        CMatrix q = build_q(g, bq).entries();
        return CMatrix(q + CMatrix::Identity(q.rows(), q.cols()));
      },
      {-1.5, -0.5, 0.0, 0.5, 1.5}, opt);
  for (const auto& br : jordan.branches)
    for (auto z : br.values) CHECK(std::abs(z - Complex(br.origin_level, 0.0)) < 1e-2);

  // Condition (A) holds and |g| < rho: branches stay real.
  const auto real_problem =
      AssembledProblem(FrequencyVector::parse("1,1"), PotentialSpec::parse("sin_linear:1,1"), 16);
  BranchOptions ro;
  ro.level_cutoff = 3.0;
  const auto real_tracks = branch_track(real_problem, {-0.4, -0.2, 0.0, 0.2, 0.4}, ro);
  CHECK(real_tracks.candidates.empty());
  for (const auto& br : real_tracks.branches) {
    REQUIRE(br.origin_cluster);
    CHECK(to_double(br.origin_cluster->level) == br.origin_level);
    for (auto z : br.values) CHECK(std::abs(z.imag()) <= 1e-6);
    for (std::size_t i = 1; i < br.g_values.size(); ++i) CHECK(br.g_values[i - 1] < br.g_values[i]);
  }

  // Condition (A) fails: the pair from 7/2 leaves the real axis by g = 0.2.
  const auto mixed = AssembledProblem(FrequencyVector::parse("2,1"), PotentialSpec::parse("sin1_cos2"), 16);
  BranchOptions mo;
  mo.level_cutoff = 3.5;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.02 * i);
  const auto tracks = branch_track(mixed, grid, mo);
  bool found = false;
  for (const auto& c : tracks.candidates) {
    const auto& br = tracks.branches[static_cast<std::size_t>(c.branch)];
    if (br.origin_level == 3.5 && c.g_high <= 0.2) found = true;
  }
  CHECK(found);

  CHECK_THROWS_AS(branch_track(mixed, {0.1, 0.2}, mo), Error);
}

TEST_CASE("series against direct spectra") {
  const auto exact = AssembledProblem(FrequencyVector::parse("1"), PotentialSpec::parse("poly:1@1"), 30);
  const auto r = rspt_vs_direct(exact, cluster_at(exact.freqs(), Rational(1, 2)), 2, {1e-3, 3e-3, 1e-2});
  CHECK(r.exact_to_machine_precision);

  const auto p = AssembledProblem(FrequencyVector::parse("1,1"), PotentialSpec::parse("sin_linear:1,1"), 24);
  const auto cl = cluster_at(p.freqs(), Rational(1));
  const auto r0 = rspt_vs_direct(p, cl, 0, {1e-3, 2e-3, 5e-3, 1e-2});
  CHECK(r0.slope == doctest::Approx(2.0).epsilon(0.15));
  const auto r2 = rspt_vs_direct(p, cl, 2, {1e-3, 2e-3, 5e-3, 1e-2});
  CHECK(std::abs(r2.slope - 4.0) < 0.3);
}
