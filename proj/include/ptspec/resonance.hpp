#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ptspec/basis.hpp"
#include "ptspec/frequency.hpp"
#include "ptspec/rational.hpp"

namespace ptspec {

enum class ParityTag { even, odd, mixed };
const char* to_string(ParityTag tag) noexcept;

/// One unperturbed level (in units of omega) and every state sitting on it.
struct Cluster {
  Rational level;
  std::vector<MultiIndex> members;
  ParityTag parity = ParityTag::even;

  int multiplicity() const { return static_cast<int>(members.size()); }
};

/// All states with level <= cutoff, grouped by exact level, ascending.
std::vector<Cluster> eigenvalue_clusters(const FrequencyVector& freqs, const Rational& cutoff);

/// The cluster at exactly `level`; throws Error(invalid_argument) if no state
/// sits there.
Cluster cluster_at(const FrequencyVector& freqs, const Rational& level);

using IntVector = std::vector<std::int64_t>;

/// Integer basis of {k in Z^d : sum_k k_k p_k / q_k = 0}, pairwise size
/// reduced, sorted by norm then lexicographically, first nonzero entry positive.
std::vector<IntVector> kernel_lattice(const FrequencyVector& freqs);

/// Number of odd components.
int odd_count(const IntVector& k);

/// Exact <omega, k> in units of omega.
Rational resonance_value(const FrequencyVector& freqs, const IntVector& k);

struct ConditionAReport {
  bool holds = true;
  std::optional<IntVector> witness;
  int kernel_rank = 0;
  std::vector<IntVector> kernel_basis;
};

/// Every primitive resonance vector has an even number of odd entries.
/// Decided by the parity classes of kernel-basis combinations over F2.
ConditionAReport check_condition_A(const FrequencyVector& freqs);

struct GapReport {
  Rational gap;
  Rational delta;
  Rational denominator_bound;  // 1 / (q_1 ... q_d)
  Rational verify_cutoff;
  Rational brute_force_gap;
};

/// Cutoff high enough that the level spacing has settled to its minimum.
Rational recommended_verify_cutoff(const FrequencyVector& freqs);

/// gap = G/Q with Q = lcm q_k and G = gcd(p_k Q / q_k); delta = gap / 2.
/// Cross-checked against the spacing of eigenvalue_clusters up to the cutoff
/// (0 selects recommended_verify_cutoff); Error(inconsistency) on mismatch.
GapReport gap_and_delta(const FrequencyVector& freqs, const Rational& verify_cutoff = Rational(0));

/// delta * omega / sup_norm. Error(unbounded_potential) without a finite norm.
double rho(const FrequencyVector& freqs, std::optional<double> sup_norm);

/// Lowest cluster holding both parities, with one even and one odd member.
struct MixedClusterWitness {
  Cluster cluster;
  MultiIndex even_member;
  MultiIndex odd_member;
};

/// Searches clusters up to a cutoff derived from the condition-A witness;
/// nullopt when condition (A) holds.
std::optional<MixedClusterWitness> find_mixed_cluster(const FrequencyVector& freqs);

}  // namespace ptspec
