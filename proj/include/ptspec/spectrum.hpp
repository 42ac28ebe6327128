#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ptspec/operator_matrix.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/problem.hpp"
#include "ptspec/resonance.hpp"

namespace ptspec {

/// Eigenvalues sorted by real part, then imaginary part. Each eigenpair is
/// checked against ||H v - lambda v|| <= 1e-8 ||H||; Error(numerical) otherwise.
std::vector<Complex> dense_spectrum(const CMatrix& h);
std::vector<Complex> dense_spectrum(const OperatorMatrix& h);

/// Polishes one eigenvalue by shifted inverse iteration in long double.
std::complex<long double> refine_eigenvalue(const CMatrix& h, Complex guess, int iterations = 3);

/// Builds H(g) at a given truncation.
using TruncatedBuilder = std::function<CMatrix(double g, int n_max)>;

struct TrustWindow {
  double threshold = 0.0;
  /// Spectrum at n_max, sorted by real part.
  std::vector<Complex> eigenvalues;
  std::vector<bool> trusted;
};

/// Compares spectra at n_max and n_max - buffer. Walking up in real part,
/// each eigenvalue is paired with the nearest unused one of the smaller
/// truncation; the walk stops at the first pair further apart than tol.
/// Error(empty_window) when the lowest eigenvalue already fails.
TrustWindow trust_window(const TruncatedBuilder& builder, double g, int n_max, int buffer = 4,
                         double tol = 1e-6);

enum class Verdict { real, complex_pair_found };
const char* to_string(Verdict v) noexcept;

struct SpectrumReport {
  double g = 0.0;
  std::vector<Complex> eigenvalues;
  std::vector<bool> trusted_mask;
  double threshold = 0.0;
  double max_abs_imag_trusted = 0.0;
  Verdict verdict = Verdict::real;
  /// The reality statement is backed by |g| < rho with condition (A).
  bool certified = false;
};

struct ScanOptions {
  int buffer = 4;
  double trust_tol = 1e-6;
  /// Imaginary parts above this count as a complex pair.
  double imag_tol = 1e-4;
  PotentialOptions potential;
};

std::vector<SpectrumReport> reality_scan(const FrequencyVector& freqs, const PotentialSpec& w,
                                         const std::vector<double>& g_grid, int n_max,
                                         const ScanOptions& options = {});

struct Branch {
  std::vector<double> g_values;
  std::vector<Complex> values;
  double origin_level = 0.0;
  std::optional<Cluster> origin_cluster;
};

struct ExceptionalPointCandidate {
  int branch = -1;
  /// Bracket around the parameter where |Im| first exceeds the threshold.
  double g_low = 0.0;
  double g_high = 0.0;
  Complex value;
};

struct BranchTrackResult {
  std::vector<Branch> branches;
  std::vector<ExceptionalPointCandidate> candidates;
  /// Steps accepted at the bisection limit without meeting the distance rule.
  std::vector<double> forced_steps;
  int bisections = 0;
};

struct BranchOptions {
  /// Track eigenvalues whose g = 0 value is at most this.
  double level_cutoff = 5.0;
  int max_depth = 8;
  double imag_threshold = 1e-4;
  /// g = 0 values closer than this start as one coincident group.
  double coincidence_tol = 1e-9;
};

/// Nearest-neighbour continuation from g = 0 (which must be in the grid) in
/// both directions. A step is bisected when the largest pairing move exceeds
/// half the smallest distance between distinct branches.
BranchTrackResult branch_track(const std::function<CMatrix(double)>& h_of_g,
                               const std::vector<double>& g_grid,
                               const BranchOptions& options = {});

/// Same, for H0 + i g W, with origin clusters attached.
BranchTrackResult branch_track(const AssembledProblem& problem, const std::vector<double>& g_grid,
                               const BranchOptions& options = {});

struct SlopeReport {
  int order = 0;
  std::vector<double> g_probe;
  std::vector<double> discrepancy;
  std::vector<bool> used;
  double slope = 0.0;
  bool exact_to_machine_precision = false;
};

/// Least-squares slope of log |E_direct - E_series| against log g. Points
/// at or below the noise floor are dropped; if all are, the series is
/// reported exact. Error(numerical) if fewer than two usable points remain.
SlopeReport rspt_vs_direct(const AssembledProblem& problem, const Cluster& cluster, int order,
                           const std::vector<double>& g_probe, double noise_floor = 1e-13);

}  // namespace ptspec
