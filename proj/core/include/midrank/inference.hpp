#ifndef MIDRANK_INFERENCE_HPP_
#define MIDRANK_INFERENCE_HPP_

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "midrank/ranker.hpp"
#include "midrank/types.hpp"

namespace midrank {

enum class SearchInit { RankSvm, Identity, Random };

struct SearchConfig {
  int num_trees = 5;
  int max_depth = 0;  // 0 means use the sequence length
  SearchInit initializer = SearchInit::RankSvm;
  std::uint64_t seed = 0;  // random inits and restart sampling
};

struct SearchTrace {
  std::size_t nodes_visited = 0;  // permutations scored
  int depth_reached = 0;          // deepest accepted expansion
  int restarts_used = 0;          // trees actually grown
  double best_score = 0.0;
};

using ScoreFunction = std::function<double(const Permutation&)>;

/// Permutations already scored; shared across the trees of one rank() call.
class VisitedSet {
 public:
  /// Returns true when the permutation was newly inserted.
  bool insert(const Permutation& p) { return seen_.insert(p.order()).second; }
  bool contains(const Permutation& p) const { return seen_.count(p.order()) > 0; }
  std::size_t size() const noexcept { return seen_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };
  std::unordered_set<std::vector<int>, Hash> seen_;
};

/// Convolves the ranker across all consecutive windows of the sequence under
/// `perm` and sums the signed square roots of the per-window responses.
double score_sequence(const std::vector<FeatureVector>& items,
                      const Permutation& perm, const LengthRanker& ranker);

/// Stateful scorer for one (sequence, ranker) pair; reuses its psi buffer.
class SequenceScorer {
 public:
  SequenceScorer(const std::vector<FeatureVector>& items,
                 const LengthRanker& ranker);
  double operator()(const Permutation& perm) const;

 private:
  const std::vector<FeatureVector>& items_;
  const LengthRanker& ranker_;
  mutable FeatureVector buffer_;
};

/// All l(l-1)/2 single-transposition neighbors, in (i, j) lexicographic
/// order of the swapped ranks.
std::vector<Permutation> pairswap_neighbors(const Permutation& perm);

struct GreedyResult {
  Permutation best;
  double best_score = 0.0;
  SearchTrace trace;
};

/// One permutation tree: expands the best unvisited pairswap child while it
/// strictly improves on the parent, for at most max_depth levels. Every
/// scored permutation (the init included) is added to `visited`.
GreedyResult greedy_search(const ScoreFunction& scorer, const Permutation& init,
                           VisitedSet& visited, int max_depth);

struct RankResult {
  Permutation best;
  double best_score = 0.0;
  SearchTrace trace;
};

/// Greedy permutation search with restarts. Tree 1 starts from the configured
/// initializer; later trees start from uniformly sampled unvisited
/// permutations. All trees share one visited set; the best permutation over
/// all trees wins. `ranksvm` supplies the lambda=2 model for
/// SearchInit::RankSvm (a lambda=2 `ranker` can serve as its own init).
RankResult rank(const std::vector<FeatureVector>& items,
                const LengthRanker& ranker, const SearchConfig& config,
                const LengthRanker* ranksvm = nullptr);

/// Enumerates all l! orderings (guarded to l <= 9) and returns the maximum;
/// exact ties resolve to the lexicographically smallest order.
std::pair<Permutation, double> exhaustive_rank(
    const std::vector<FeatureVector>& items, const LengthRanker& ranker);

/// Same enumeration against an arbitrary scorer; the tests' oracle.
std::pair<Permutation, double> exhaustive_argmax(std::size_t length,
                                                 const ScoreFunction& scorer);

/// Sorts items by the pointwise projection induced by a lambda=2 ranker,
/// descending, stable in the original index. Difference-style maps project
/// as theta.x; the stacked map reduces to (theta_head - theta_tail).x.
Permutation ranksvm_init(const std::vector<FeatureVector>& items,
                         const LengthRanker& pair_ranker);

}  // namespace midrank

#endif  // MIDRANK_INFERENCE_HPP_
