#include "ptspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/LU>

#include <lapacke.h>

#include "ptspec/error.hpp"
#include "ptspec/rspt.hpp"

namespace ptspec {

namespace {

bool by_real(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

// std::complex<double> and the C99 complex type share layout.
lapack_complex_double* lapack_ptr(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

const char* to_string(Verdict v) noexcept {
  return v == Verdict::real ? "real" : "complex-pair-found";
}

std::vector<Complex> dense_spectrum(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) fail(ErrorKind::dimension, "spectrum of a non-square matrix");
  if (!h.allFinite()) fail(ErrorKind::numerical, "matrix has non-finite entries");
  const auto n = static_cast<lapack_int>(h.rows());
  CMatrix a = h;  // zgeev overwrites its input
  CMatrix vecs(h.rows(), h.cols());
  Eigen::VectorXcd vals(h.rows());
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lapack_ptr(a.data()), n,
                                        lapack_ptr(vals.data()), nullptr, 1, lapack_ptr(vecs.data()), n);
  if (info != 0) fail(ErrorKind::numerical, "eigensolver did not converge (zgeev info " + std::to_string(info) + ")");
  const double scale = h.norm();
  const CMatrix resid = h * vecs - vecs * vals.asDiagonal();
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    const double r = resid.col(j).norm() / vecs.col(j).norm();
    if (!(r <= 1e-8 * std::max(scale, 1e-300)))
      fail(ErrorKind::numerical, "eigenpair residual " + std::to_string(r) + " exceeds 1e-8 ||H||");
  }
  std::vector<Complex> ev(vals.data(), vals.data() + vals.size());
  std::sort(ev.begin(), ev.end(), by_real);
  // Real parts equal up to roundoff (conjugate pairs) order by imaginary part.
  const double tie = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, h.norm());
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j].real() - ev[j - 1].real() <= tie) ++j;
    std::sort(ev.begin() + static_cast<std::ptrdiff_t>(i), ev.begin() + static_cast<std::ptrdiff_t>(j),
              [](Complex a, Complex b) { return a.imag() < b.imag(); });
    i = j;
  }
  return ev;
}

std::vector<Complex> dense_spectrum(const OperatorMatrix& h) { return dense_spectrum(h.entries()); }

std::complex<long double> refine_eigenvalue(const CMatrix& h, Complex guess, int iterations) {
  using LC = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<LC, Eigen::Dynamic, 1>;
  const auto n = h.rows();
  const LMatrix hl = h.cast<LC>();
  // Nudge the shift off the (double) eigenvalue so the factorization stays
  // regular; convergence rate is still ~1e-13 per step.
  const long double nudge = 1e-13L * (1.0L + std::abs(static_cast<long double>(std::abs(guess))));
  const LC shift = LC(guess.real(), guess.imag()) + LC(nudge, 0.0L);
  Eigen::PartialPivLU<LMatrix> lu(hl - shift * LMatrix::Identity(n, n));
  LVector x = LVector::Ones(n);
  for (int i = 0; i < iterations; ++i) {
    x = lu.solve(x);
    x /= x.norm();
  }
  if (!x.allFinite()) return LC(guess.real(), guess.imag());
  // Complex-symmetric matrices have conj(x) as left eigenvector, so the
  // bilinear quotient is second-order accurate there.
  const bool symmetric = (h - h.transpose()).cwiseAbs().maxCoeff() == 0.0;
  const LVector hx = hl * x;
  if (symmetric) return (x.transpose() * hx)(0) / (x.transpose() * x)(0);
  return x.dot(hx) / x.squaredNorm();
}

TrustWindow trust_window(const TruncatedBuilder& builder, double g, int n_max, int buffer,
                         double tol) {
  require(buffer > 0 && n_max > buffer, "trust window needs n_max > buffer > 0");
  TrustWindow w;
  w.eigenvalues = dense_spectrum(builder(g, n_max));
  const auto small = dense_spectrum(builder(g, n_max - buffer));
  w.trusted.assign(w.eigenvalues.size(), false);
  std::vector<bool> used(small.size(), false);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < w.eigenvalues.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = small.size();
    for (std::size_t j = 0; j < small.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(w.eigenvalues[i] - small[j]);
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    if (arg == small.size() || !(best < tol)) break;
    used[arg] = true;
    w.trusted[i] = true;
    w.threshold = w.eigenvalues[i].real();
    ++matched;
  }
  if (matched == 0)
    fail(ErrorKind::empty_window, "no eigenvalue agrees between n_max=" + std::to_string(n_max) +
                                      " and n_max=" + std::to_string(n_max - buffer) +
                                      " within tol");
  return w;
}

std::vector<SpectrumReport> reality_scan(const FrequencyVector& freqs, const PotentialSpec& w,
                                         const std::vector<double>& g_grid, int n_max,
                                         const ScanOptions& options) {
  require(!g_grid.empty(), "empty g grid");
  if (!w.sup_norm())
    fail(ErrorKind::unbounded_potential, "reality scans need a bounded potential");
  const AssembledProblem big(freqs, w, n_max, options.potential);
  const AssembledProblem small = big.with_n_max(n_max - options.buffer);
  auto builder = [&](double g, int n) { return (n == n_max ? big : small).h(g).entries(); };

  const bool cond_a = check_condition_A(freqs).holds;
  std::optional<double> radius;
  if (w.sup_norm()) radius = rho(freqs, w.sup_norm());

  std::vector<SpectrumReport> out;
  for (double g : g_grid) {
    const TrustWindow tw = trust_window(builder, g, n_max, options.buffer, options.trust_tol);
    SpectrumReport r;
    r.g = g;
    r.eigenvalues = tw.eigenvalues;
    r.trusted_mask = tw.trusted;
    r.threshold = tw.threshold;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      if (r.trusted_mask[i]) r.max_abs_imag_trusted = std::max(r.max_abs_imag_trusted, std::abs(r.eigenvalues[i].imag()));
    r.verdict = r.max_abs_imag_trusted <= options.imag_tol ? Verdict::real : Verdict::complex_pair_found;
    r.certified = r.verdict == Verdict::real && cond_a && radius && std::abs(g) < *radius;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

struct Tracker {
  const std::function<CMatrix(double)>& h_of_g;
  const BranchOptions& opt;
  BranchTrackResult& result;

  // Smallest distance between branches that are not coincident.
  double separation(const std::vector<Complex>& cur) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        const double dist = std::abs(cur[i] - cur[j]);
        if (dist > opt.coincidence_tol * (1.0 + std::abs(cur[i]))) best = std::min(best, dist);
      }
    return best;
  }

  static std::vector<Complex> pair_up(const std::vector<Complex>& cur, const std::vector<Complex>& spec) {
    struct Cand {
      double dist;
      std::size_t b, e;
    };
    std::vector<Cand> cands;
    for (std::size_t b = 0; b < cur.size(); ++b)
      for (std::size_t e = 0; e < spec.size(); ++e) cands.push_back({std::abs(cur[b] - spec[e]), b, e});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      return x.dist != y.dist ? x.dist < y.dist : (x.b != y.b ? x.b < y.b : x.e < y.e);
    });
    std::vector<Complex> next(cur.size());
    std::vector<bool> bdone(cur.size(), false), edone(spec.size(), false);
    for (const auto& c : cands) {
      if (bdone[c.b] || edone[c.e]) continue;
      bdone[c.b] = edone[c.e] = true;
      next[c.b] = spec[c.e];
    }
    return next;
  }

  std::vector<Complex> advance(double ga, const std::vector<Complex>& cur, double gb, int depth) {
    const auto next = pair_up(cur, dense_spectrum(h_of_g(gb)));
    double move = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) move = std::max(move, std::abs(next[i] - cur[i]));
    if (move <= 0.5 * separation(cur)) return next;
    if (depth >= opt.max_depth) {
      result.forced_steps.push_back(gb);
      return next;
    }
    ++result.bisections;
    const double mid = 0.5 * (ga + gb);
    const auto half = advance(ga, cur, mid, depth + 1);
    return advance(mid, half, gb, depth + 1);
  }

  Complex nearest(double g, Complex to) const {
    const auto spec = dense_spectrum(h_of_g(g));
    Complex best = spec.front();
    for (auto z : spec)
      if (std::abs(z - to) < std::abs(best - to)) best = z;
    return best;
  }

  // Bisects [ga, gb] for the first parameter where the branch leaves the
  // real axis by more than the threshold.
  void locate_ep(std::size_t branch, double ga, Complex va, double gb, Complex vb) {
    double lo = ga, hi = gb;
    Complex at_hi = vb;
    for (int it = 0; it < 40 && std::abs(hi - lo) > 1e-6 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const Complex z = nearest(mid, va);
      if (std::abs(z.imag()) > opt.imag_threshold) {
        hi = mid;
        at_hi = z;
      } else {
        lo = mid;
      }
    }
    result.candidates.push_back({static_cast<int>(branch), lo, hi, at_hi});
  }

  void sweep(const std::vector<double>& gs, std::vector<Complex> cur) {
    for (std::size_t s = 1; s < gs.size(); ++s) {
      const auto next = advance(gs[s - 1], cur, gs[s], 0);
      for (std::size_t b = 0; b < cur.size(); ++b) {
        if (std::abs(cur[b].imag()) <= opt.imag_threshold && std::abs(next[b].imag()) > opt.imag_threshold)
          locate_ep(b, gs[s - 1], cur[b], gs[s], next[b]);
        result.branches[b].g_values.push_back(gs[s]);
        result.branches[b].values.push_back(next[b]);
      }
      cur = next;
    }
  }
};

}  // namespace

BranchTrackResult branch_track(const std::function<CMatrix(double)>& h_of_g,
                               const std::vector<double>& g_grid, const BranchOptions& options) {
  std::vector<double> grid = g_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const auto zero = std::find_if(grid.begin(), grid.end(), [](double g) { return std::abs(g) < 1e-15; });
  require(zero != grid.end(), "branch tracking needs g = 0 in the grid");
  *zero = 0.0;

  std::vector<Complex> start;
  for (auto z : dense_spectrum(h_of_g(0.0)))
    if (z.real() <= options.level_cutoff + 1e-9) start.push_back(z);
  require(!start.empty(), "no eigenvalue below the level cutoff at g = 0");

  BranchTrackResult result;
  result.branches.resize(start.size());
  for (std::size_t b = 0; b < start.size(); ++b) {
    result.branches[b].origin_level = start[b].real();
    result.branches[b].g_values.push_back(0.0);
    result.branches[b].values.push_back(start[b]);
  }
  Tracker t{h_of_g, options, result};
  std::vector<double> up(zero, grid.end());
  std::vector<double> down(grid.begin(), zero + 1);
  std::reverse(down.begin(), down.end());
  t.sweep(up, start);
  t.sweep(down, start);

  // Put every branch in increasing g.
  for (auto& br : result.branches) {
    std::vector<std::size_t> order(br.g_values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return br.g_values[a] < br.g_values[b]; });
    Branch sorted;
    sorted.origin_level = br.origin_level;
    for (auto i : order) {
      sorted.g_values.push_back(br.g_values[i]);
      sorted.values.push_back(br.values[i]);
    }
    br = std::move(sorted);
  }
  return result;
}

BranchTrackResult branch_track(const AssembledProblem& problem, const std::vector<double>& g_grid,
                               const BranchOptions& options) {
  auto result = branch_track([&](double g) { return problem.h(g).entries(); }, g_grid, options);
  std::map<Rational, Cluster> seen;
  for (auto& br : result.branches) {
    // Match the g = 0 value to the nearest exact level present in the basis.
    const Rational* best = nullptr;
    for (const auto& l : problem.levels())
      if (!best || std::abs(to_double(l) * problem.freqs().omega() - br.origin_level) <
                       std::abs(to_double(*best) * problem.freqs().omega() - br.origin_level))
        best = &l;
    auto it = seen.find(*best);
    if (it == seen.end()) it = seen.emplace(*best, cluster_at(problem.freqs(), *best)).first;
    br.origin_cluster = it->second;
  }
  return result;
}

SlopeReport rspt_vs_direct(const AssembledProblem& problem, const Cluster& cluster, int order,
                           const std::vector<double>& g_probe, double noise_floor) {
  require(!g_probe.empty(), "no probe points");
  const PerturbationSeries s = series(problem, cluster, order);
  SlopeReport r;
  r.order = order;
  r.g_probe = g_probe;
  for (double g : g_probe) {
    require(g > 0.0, "probe points must be positive");
    const CMatrix h = problem.h(g).entries();
    const auto direct = dense_spectrum(h);
    const auto approx = series_eigenvalues(s, g);
    std::vector<bool> used(direct.size(), false);
    long double worst = 0.0L;
    for (std::size_t a = 0; a < approx.size(); ++a) {
      std::size_t arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < direct.size(); ++j)
        if (!used[j] && std::abs(direct[j] - approx[a]) < best) {
          best = std::abs(direct[j] - approx[a]);
          arg = j;
        }
      used[arg] = true;
      // Polish only isolated eigenvalues; inverse iteration mixes near-degenerate ones.
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < direct.size(); ++j)
        if (j != arg) gap = std::min(gap, std::abs(direct[j] - direct[arg]));
      std::complex<long double> e_direct(direct[arg].real(), direct[arg].imag());
      if (gap > 1e-6) e_direct = refine_eigenvalue(h, direct[arg]);
      std::complex<long double> e_series(approx[a].real(), approx[a].imag());
      if (approx.size() == 1) {
        e_series = 0.0L;
        long double gp = 1.0L;
        for (const auto& gm : s.g_matrices) {
          e_series += gp * std::complex<long double>(gm(0, 0).real(), gm(0, 0).imag());
          gp *= g;
        }
      }
      worst = std::max(worst, std::abs(e_direct - e_series));
    }
    r.discrepancy.push_back(static_cast<double>(worst));
    r.used.push_back(worst > noise_floor);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < g_probe.size(); ++i)
    if (r.used[i]) {
      lx.push_back(std::log(g_probe[i]));
      ly.push_back(std::log(r.discrepancy[i]));
    }
  if (lx.empty()) {
    r.exact_to_machine_precision = true;
    return r;
  }
  if (lx.size() < 2)
    fail(ErrorKind::numerical, "degenerate fit: only one discrepancy above the noise floor");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) fail(ErrorKind::numerical, "degenerate fit: probe points coincide");
  r.slope = sxy / sxx;
  return r;
}

}  // namespace ptspec
