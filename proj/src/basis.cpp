#include "ptspec/basis.hpp"

#include <numeric>

#include "ptspec/error.hpp"

namespace ptspec {

MultiIndex::MultiIndex(std::vector<int> n) : n_(std::move(n)) {
  require(!n_.empty(), "multi-index must have at least one mode");
  for (int v : n_) require(v >= 0, "occupation numbers must be nonnegative");
}

int MultiIndex::grade() const { return std::accumulate(n_.begin(), n_.end(), 0); }

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = grade() <=> other.grade(); c != 0) return c;
  return n_ <=> other.n_;
}

int parity_of(const MultiIndex& state) { return state.grade() % 2 == 0 ? 1 : -1; }

std::string to_string(const MultiIndex& state) {
  std::string s = "(";
  for (std::size_t k = 0; k < state.dim(); ++k) {
    if (k) s += ",";
    s += std::to_string(state[k]);
  }
  return s + ")";
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

namespace {

// Lexicographic enumeration of all compositions of `grade` into d parts.
void fill_grade(int d, int grade, std::vector<int>& cur, int k, std::vector<MultiIndex>& out) {
  if (k == d - 1) {
    cur[k] = grade;
    out.emplace_back(cur);
    return;
  }
  for (int v = 0; v <= grade; ++v) {
    cur[k] = v;
    fill_grade(d, grade - v, cur, k + 1, out);
  }
}

}  // namespace

BasisTruncation::BasisTruncation(int d, int n_max) : d_(d), n_max_(n_max) {
  require(d >= 1, "basis dimension d must be >= 1");
  require(n_max >= 0, "n_max must be >= 0");
  states_.reserve(binomial(n_max + d, d));
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  for (int grade = 0; grade <= n_max; ++grade) {
    grade_offsets_.push_back(states_.size());
    fill_grade(d, grade, cur, 0, states_);
  }
  grade_offsets_.push_back(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::size_t BasisTruncation::index_of(const MultiIndex& state) const {
  auto it = index_.find(state);
  if (it == index_.end() || state.dim() != static_cast<std::size_t>(d_))
    fail(ErrorKind::invalid_argument, "state " + to_string(state) + " is not in " + id());
  return it->second;
}

bool BasisTruncation::contains(const MultiIndex& state) const {
  return state.dim() == static_cast<std::size_t>(d_) && index_.count(state) > 0;
}

std::pair<std::size_t, std::size_t> BasisTruncation::grade_range(int grade) const {
  require(grade >= 0 && grade <= n_max_, "grade out of range");
  return {grade_offsets_[static_cast<std::size_t>(grade)],
          grade_offsets_[static_cast<std::size_t>(grade) + 1]};
}

std::string BasisTruncation::id() const {
  return "graded-lex(d=" + std::to_string(d_) + ",n_max=" + std::to_string(n_max_) + ")";
}

BasisTruncation enumerate_basis(int d, int n_max) { return BasisTruncation(d, n_max); }

}  // namespace ptspec
