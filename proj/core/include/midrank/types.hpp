#ifndef MIDRANK_TYPES_HPP_
#define MIDRANK_TYPES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "midrank/error.hpp"

namespace midrank {

/// Dense feature activations. Inputs are expected to be L2-normalized
/// before training or inference (see l2_normalize).
using FeatureVector = std::vector<double>;

/// Total ordering of item positions. order()[r] is the 0-based index of the
/// item placed at rank r, so the front of the vector is the top of the
/// ranking. Immutable after construction and always a bijection.
class Permutation {
 public:
  /// Empty placeholder; not valid for ranking until assigned.
  Permutation() = default;

  static Permutation identity(std::size_t length);

  /// Validates that `order` is a bijection on {0, ..., n-1} with n >= 2.
  static Permutation from_order(std::vector<int> order);

  std::size_t size() const noexcept { return order_.size(); }
  int operator[](std::size_t rank) const { return order_[rank]; }
  const std::vector<int>& order() const noexcept { return order_; }

  /// ranks()[item] = rank at which `item` is placed.
  std::vector<int> ranks() const;

  Permutation inverse() const;

  /// (*this) applied after `inner`: result[r] = order_[inner[r]].
  Permutation compose(const Permutation& inner) const;

  bool operator==(const Permutation&) const = default;

 private:
  explicit Permutation(std::vector<int> order) : order_(std::move(order)) {}
  std::vector<int> order_;
};

/// Validates and wraps an index list as a Permutation.
inline Permutation make_permutation(std::vector<int> order) {
  return Permutation::from_order(std::move(order));
}

struct Sequence {
  std::string id;
  std::vector<FeatureVector> items;           // all of one dimensionality
  std::optional<Permutation> ground_truth;    // correct ordering of `items`

  std::size_t length() const noexcept { return items.size(); }
  std::size_t dim() const noexcept { return items.empty() ? 0 : items[0].size(); }
};

/// Throws invariant_violation / dimension_mismatch / too_short when the
/// Sequence invariants do not hold.
void validate(const Sequence& seq);

/// lambda consecutive elements of some ordered parent sequence, presented in
/// a candidate order. label +1 means the presented order is the parent's
/// ground-truth order, -1 means it was scrambled.
struct Subsequence {
  std::string parent_id;
  std::size_t start = 0;   // window offset in ground-truth rank space
  int lambda = 0;
  std::vector<FeatureVector> vectors;
  int label = 0;
};

/// Half-open window [start, end) over sequence positions.
struct Window {
  std::size_t start;
  std::size_t end;

  std::size_t length() const noexcept { return end - start; }
  bool operator==(const Window&) const = default;
};

/// All length-lambda consecutive windows of a length-`seq_len` sequence.
/// Exactly seq_len - lambda + 1 of them; window j covers j .. j+lambda-1.
std::vector<Window> consecutive_subsequences(std::size_t seq_len, int lambda);

/// Scales v to unit L2 norm. All-zero vectors pass through unchanged; any
/// NaN/Inf entry raises non_finite_entry.
FeatureVector l2_normalize(const FeatureVector& v);

bool all_finite(const FeatureVector& v) noexcept;

double dot(const FeatureVector& a, const FeatureVector& b);

}  // namespace midrank

#endif  // MIDRANK_TYPES_HPP_
