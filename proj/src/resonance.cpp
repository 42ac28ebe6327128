#include "ptspec/resonance.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>

#include "ptspec/error.hpp"

namespace ptspec {

const char* to_string(ParityTag tag) noexcept {
  switch (tag) {
    case ParityTag::even: return "even";
    case ParityTag::odd: return "odd";
    case ParityTag::mixed: return "mixed";
  }
  return "unknown";
}

namespace {

void enumerate_levels(const FrequencyVector& f, const Rational& cutoff, std::size_t k,
                      std::vector<int>& occ, Rational level,
                      std::map<Rational, std::vector<MultiIndex>>& out) {
  if (k == occ.size()) {
    out[level].emplace_back(occ);
    return;
  }
  const Rational step = f.ratio(static_cast<int>(k));
  for (occ[k] = 0; level + step * occ[k] <= cutoff; ++occ[k])
    enumerate_levels(f, cutoff, k + 1, occ, level + step * occ[k], out);
  occ[k] = 0;
}

ParityTag tag_of(const std::vector<MultiIndex>& members) {
  bool even = false, odd = false;
  for (const auto& m : members) (parity_of(m) > 0 ? even : odd) = true;
  if (even && odd) return ParityTag::mixed;
  return odd ? ParityTag::odd : ParityTag::even;
}

std::int64_t dot(const IntVector& a, const IntVector& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// round(a / b) for b > 0, ties away from zero not required.
std::int64_t round_div(std::int64_t a, std::int64_t b) {
  std::int64_t num = 2 * a + b;
  std::int64_t den = 2 * b;
  std::int64_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

void sign_normalize(IntVector& v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

// Integer row of the resonance form: a_k = p_k Q / q_k, Q = lcm(q).
IntVector integer_row(const FrequencyVector& f, std::int64_t* lcm_out = nullptr) {
  std::int64_t q = 1;
  for (const auto& m : f.multipliers()) q = lcm64(q, m.q);
  IntVector a;
  for (const auto& m : f.multipliers()) a.push_back(m.p * (q / m.q));
  if (lcm_out) *lcm_out = q;
  return a;
}

std::int64_t gcd_of(const IntVector& v) {
  std::int64_t g = 0;
  for (auto x : v) g = gcd64(g, std::llabs(x));
  return g;
}

}  // namespace

std::vector<Cluster> eigenvalue_clusters(const FrequencyVector& freqs, const Rational& cutoff) {
  std::map<Rational, std::vector<MultiIndex>> by_level;
  if (cutoff >= freqs.zero_point()) {
    std::vector<int> occ(static_cast<std::size_t>(freqs.d()), 0);
    enumerate_levels(freqs, cutoff, 0, occ, freqs.zero_point(), by_level);
  }
  std::vector<Cluster> out;
  out.reserve(by_level.size());
  for (auto& [level, members] : by_level) {
    std::sort(members.begin(), members.end());
    Cluster c{level, std::move(members), ParityTag::even};
    c.parity = tag_of(c.members);
    out.push_back(std::move(c));
  }
  return out;
}

Cluster cluster_at(const FrequencyVector& freqs, const Rational& level) {
  auto clusters = eigenvalue_clusters(freqs, level);
  if (clusters.empty() || clusters.back().level != level)
    fail(ErrorKind::invalid_argument, "no unperturbed state has level " + to_string(level));
  return std::move(clusters.back());
}

std::vector<IntVector> kernel_lattice(const FrequencyVector& freqs) {
  IntVector row = integer_row(freqs);
  const std::int64_t g = gcd_of(row);
  for (auto& x : row) x /= g;
  const std::size_t d = row.size();

  // Column reduction of the row to a single pivot; U stays unimodular, so the
  // remaining columns of U span the saturated kernel.
  std::vector<IntVector> cols(d, IntVector(d, 0));
  for (std::size_t i = 0; i < d; ++i) cols[i][i] = 1;
  while (true) {
    std::size_t piv = d;
    for (std::size_t i = 0; i < d; ++i)
      if (row[i] != 0 && (piv == d || std::llabs(row[i]) < std::llabs(row[piv]))) piv = i;
    bool done = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == piv || row[j] == 0) continue;
      const std::int64_t q = row[j] / row[piv];
      row[j] -= q * row[piv];
      for (std::size_t k = 0; k < d; ++k) cols[j][k] -= q * cols[piv][k];
      if (row[j] != 0) done = false;
    }
    if (done) {
      std::vector<IntVector> basis;
      for (std::size_t j = 0; j < d; ++j)
        if (j != piv) basis.push_back(cols[j]);
      // Pairwise size reduction until no vector can be shortened.
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < basis.size(); ++i)
          for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            const std::int64_t nj = dot(basis[j], basis[j]);
            const std::int64_t mu = round_div(dot(basis[i], basis[j]), nj);
            if (mu == 0) continue;
            IntVector cand = basis[i];
            for (std::size_t k = 0; k < d; ++k) cand[k] -= mu * basis[j][k];
            if (dot(cand, cand) < dot(basis[i], basis[i])) {
              basis[i] = std::move(cand);
              changed = true;
            }
          }
      }
      for (auto& b : basis) sign_normalize(b);
      std::sort(basis.begin(), basis.end(), [](const IntVector& a, const IntVector& b) {
        const auto na = dot(a, a), nb = dot(b, b);
        if (na != nb) return na < nb;
        return a < b;
      });
      return basis;
    }
  }
}

int odd_count(const IntVector& k) {
  int c = 0;
  for (auto x : k) c += (x % 2 != 0) ? 1 : 0;
  return c;
}

Rational resonance_value(const FrequencyVector& freqs, const IntVector& k) {
  require(static_cast<int>(k.size()) == freqs.d(), "resonance vector has wrong dimension");
  Rational s(0);
  for (int i = 0; i < freqs.d(); ++i) s += freqs.ratio(i) * k[static_cast<std::size_t>(i)];
  return s;
}

ConditionAReport check_condition_A(const FrequencyVector& freqs) {
  ConditionAReport r;
  r.kernel_basis = kernel_lattice(freqs);
  r.kernel_rank = static_cast<int>(r.kernel_basis.size());
  const std::size_t d = static_cast<std::size_t>(freqs.d());
  require(r.kernel_rank < 63, "kernel rank too large for F2 enumeration");
  const std::uint64_t classes = std::uint64_t{1} << r.kernel_rank;
  for (std::uint64_t mask = 1; mask < classes; ++mask) {
    IntVector combo(d, 0);
    for (int i = 0; i < r.kernel_rank; ++i)
      if (mask >> i & 1)
        for (std::size_t k = 0; k < d; ++k) combo[k] += r.kernel_basis[static_cast<std::size_t>(i)][k];
    if (odd_count(combo) % 2 == 0) continue;
    // Odd weight means the class is nonzero mod 2, so the gcd is odd and
    // dividing by it keeps the parity pattern.
    const std::int64_t g = gcd_of(combo);
    for (auto& x : combo) x /= g;
    sign_normalize(combo);
    r.holds = false;
    r.witness = std::move(combo);
    return r;
  }
  return r;
}

Rational recommended_verify_cutoff(const FrequencyVector& freqs) {
  std::int64_t q = 1;
  IntVector a = integer_row(freqs, &q);
  const std::int64_t g = gcd_of(a);
  std::int64_t lo = a.front() / g, hi = lo;
  for (auto x : a) {
    lo = std::min(lo, x / g);
    hi = std::max(hi, x / g);
  }
  // Every integer >= (lo - 1)(hi - 1) is a nonnegative combination of the
  // reduced generators, so two consecutive levels exist below this.
  return freqs.zero_point() + Rational((lo - 1) * (hi - 1) + 2) * Rational(g, q);
}

GapReport gap_and_delta(const FrequencyVector& freqs, const Rational& verify_cutoff) {
  std::int64_t q = 1;
  const IntVector a = integer_row(freqs, &q);
  GapReport r;
  r.gap = Rational(gcd_of(a), q);
  r.delta = r.gap / 2;
  std::int64_t prod = 1;
  for (const auto& m : freqs.multipliers()) prod *= m.q;
  r.denominator_bound = Rational(1, prod);

  const Rational recommended = recommended_verify_cutoff(freqs);
  r.verify_cutoff = verify_cutoff == Rational(0) ? recommended : verify_cutoff;
  const auto clusters = eigenvalue_clusters(freqs, r.verify_cutoff);
  require(clusters.size() >= 2, "verify_cutoff " + to_string(r.verify_cutoff) +
                                    " holds fewer than two levels");
  r.brute_force_gap = clusters[1].level - clusters[0].level;
  for (std::size_t i = 1; i < clusters.size(); ++i)
    r.brute_force_gap = std::min(r.brute_force_gap, clusters[i].level - clusters[i - 1].level);
  if (r.brute_force_gap != r.gap) {
    if (r.verify_cutoff < recommended)
      fail(ErrorKind::invalid_argument, "verify_cutoff " + to_string(r.verify_cutoff) +
                                            " is too low to resolve the minimum spacing; use >= " +
                                            to_string(recommended));
    fail(ErrorKind::inconsistency, "closed-form gap " + to_string(r.gap) +
                                       " disagrees with enumerated spacing " +
                                       to_string(r.brute_force_gap));
  }
  if (r.gap < r.denominator_bound)
    fail(ErrorKind::inconsistency, "gap below 1/(q_1...q_d)");
  return r;
}

double rho(const FrequencyVector& freqs, std::optional<double> sup_norm) {
  if (!sup_norm)
    fail(ErrorKind::unbounded_potential, "rho needs a bounded potential; this one is unbounded");
  require(*sup_norm > 0.0, "sup_norm must be positive");
  return to_double(gap_and_delta(freqs).delta) * freqs.omega() / *sup_norm;
}

std::optional<MixedClusterWitness> find_mixed_cluster(const FrequencyVector& freqs) {
  const auto a = check_condition_A(freqs);
  if (a.holds) return std::nullopt;
  std::int64_t l1 = 0;
  for (auto x : *a.witness) l1 += std::llabs(x);
  Rational top(0);
  for (int k = 0; k < freqs.d(); ++k) top = std::max(top, freqs.ratio(k));
  const Rational cutoff = freqs.zero_point() + top * l1;
  for (auto& c : eigenvalue_clusters(freqs, cutoff)) {
    if (c.parity != ParityTag::mixed) continue;
    MixedClusterWitness w{c, {}, {}};
    for (const auto& m : c.members) {
      if (parity_of(m) > 0 && w.even_member.dim() == 0) w.even_member = m;
      if (parity_of(m) < 0 && w.odd_member.dim() == 0) w.odd_member = m;
    }
    return w;
  }
  fail(ErrorKind::inconsistency, "condition (A) fails but no mixed cluster below " + to_string(cutoff));
}

}  // namespace ptspec
