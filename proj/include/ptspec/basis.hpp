#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ptspec {

/// Occupation numbers (n_1, ..., n_d) of a product of Hermite functions.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> n);

  std::size_t dim() const { return n_.size(); }
  int operator[](std::size_t k) const { return n_[k]; }
  const std::vector<int>& occupations() const { return n_; }

  /// Total number of quanta, sum of n_k.
  int grade() const;

  /// Graded lexicographic order: by total quanta first, then lexicographic.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<int> n_;
};

/// (-1)^(sum n_k): parity of the product state under x -> -x.
int parity_of(const MultiIndex& state);

std::string to_string(const MultiIndex& state);

/// All multi-indices with sum n_k <= n_max, in graded lexicographic order.
class BasisTruncation {
 public:
  BasisTruncation(int d, int n_max);

  int d() const { return d_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<MultiIndex>& states() const { return states_; }
  const MultiIndex& state(std::size_t i) const { return states_.at(i); }

  /// Index of a state; throws Error(invalid_argument) if it is not in the basis.
  std::size_t index_of(const MultiIndex& state) const;
  bool contains(const MultiIndex& state) const;

  /// Half-open index range [first, last) of the states with the given grade.
  std::pair<std::size_t, std::size_t> grade_range(int grade) const;

  /// Stable identifier used to tie matrices to the basis they were built on.
  std::string id() const;

 private:
  int d_;
  int n_max_;
  std::vector<MultiIndex> states_;
  std::map<MultiIndex, std::size_t> index_;
  std::vector<std::size_t> grade_offsets_;
};

BasisTruncation enumerate_basis(int d, int n_max);

/// Binomial coefficient C(n, k) as an exact count.
std::size_t binomial(int n, int k);

}  // namespace ptspec
