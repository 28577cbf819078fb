#include "midrank/types.hpp"

#include <cmath>
#include <numeric>

namespace midrank {

Permutation Permutation::identity(std::size_t length) {
  if (length < 2) {
    throw Error(errc::too_short, "permutation length must be >= 2, got " +
                                     std::to_string(length));
  }
  std::vector<int> order(length);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

Permutation Permutation::from_order(std::vector<int> order) {
  const std::size_t n = order.size();
  if (n < 2) {
    throw Error(errc::too_short,
                "permutation length must be >= 2, got " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (int idx : order) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
      throw Error(errc::index_out_of_range,
                  "index " + std::to_string(idx) + " outside [0, " +
                      std::to_string(n) + ")");
    }
    if (seen[static_cast<std::size_t>(idx)]) {
      throw Error(errc::duplicate_index,
                  "index " + std::to_string(idx) + " appears twice");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
  return Permutation(std::move(order));
}

std::vector<int> Permutation::ranks() const {
  std::vector<int> r(order_.size());
  for (std::size_t rank = 0; rank < order_.size(); ++rank) {
    r[static_cast<std::size_t>(order_[rank])] = static_cast<int>(rank);
  }
  return r;
}

Permutation Permutation::inverse() const {
  return Permutation(ranks());
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (inner.size() != size()) {
    throw Error(errc::length_mismatch,
                "cannot compose permutations of lengths " +
                    std::to_string(size()) + " and " +
                    std::to_string(inner.size()));
  }
  std::vector<int> out(size());
  for (std::size_t r = 0; r < size(); ++r) {
    out[r] = order_[static_cast<std::size_t>(inner[r])];
  }
  return Permutation(std::move(out));
}

void validate(const Sequence& seq) {
  if (seq.items.size() < 2) {
    throw Error(errc::too_short, "sequence '" + seq.id + "' has " +
                                     std::to_string(seq.items.size()) +
                                     " items, need >= 2");
  }
  const std::size_t d = seq.items[0].size();
  for (const auto& item : seq.items) {
    if (item.size() != d) {
      throw Error(errc::dimension_mismatch,
                  "sequence '" + seq.id + "' mixes dims " + std::to_string(d) +
                      " and " + std::to_string(item.size()));
    }
    if (!all_finite(item)) {
      throw Error(errc::non_finite_entry,
                  "sequence '" + seq.id + "' contains NaN/Inf");
    }
  }
  if (seq.ground_truth && seq.ground_truth->size() != seq.items.size()) {
    throw Error(errc::invariant_violation,
                "sequence '" + seq.id + "' ground truth covers " +
                    std::to_string(seq.ground_truth->size()) + " of " +
                    std::to_string(seq.items.size()) + " items");
  }
}

std::vector<Window> consecutive_subsequences(std::size_t seq_len, int lambda) {
  if (lambda < 2 || static_cast<std::size_t>(lambda) > seq_len) {
    throw Error(errc::lambda_out_of_range,
                "lambda " + std::to_string(lambda) +
                    " outside [2, " + std::to_string(seq_len) + "]");
  }
  const std::size_t count = seq_len - static_cast<std::size_t>(lambda) + 1;
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    windows.push_back({j, j + static_cast<std::size_t>(lambda)});
  }
  return windows;
}

bool all_finite(const FeatureVector& v) noexcept {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

FeatureVector l2_normalize(const FeatureVector& v) {
  if (!all_finite(v)) {
    throw Error(errc::non_finite_entry, "cannot normalize NaN/Inf vector");
  }
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  if (norm_sq == 0.0) return v;  // all-zero convention
  const double norm = std::sqrt(norm_sq);
  FeatureVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw Error(errc::dimension_mismatch,
                "dot of dims " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace midrank
