#ifndef MIDRANK_FUSION_HPP_
#define MIDRANK_FUSION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midrank/inference.hpp"
#include "midrank/ranker.hpp"

namespace midrank {

enum class FusionKind { WeightedMajorityVote, WinnerTakesAll, BestSingle };

struct FusionStrategy {
  FusionKind kind = FusionKind::WeightedMajorityVote;
  int best_lambda = 0;  // only read for BestSingle
};

std::string to_string(FusionKind kind);
FusionKind fusion_kind_from_string(const std::string& name);

/// The collection of per-length rankers plus the fusion configuration.
/// `initializer` is the lambda=2 pair model used to seed the greedy search;
/// when lambda 2 belongs to the trained range it aliases that ranker.
struct Ensemble {
  FeatureMapKind feature_map = FeatureMapKind::StackedDiff;
  std::size_t dim = 0;
  std::vector<LengthRanker> rankers;  // distinct lambdas, ascending
  std::optional<LengthRanker> initializer;
  FusionStrategy fusion;
};

void validate(const Ensemble& ensemble);

/// One ranker's verdict on a test sequence.
struct RankerOutput {
  int lambda = 0;
  Permutation perm;
  double score = 0.0;
  SearchTrace trace;
};

/// Score-weighted position voting: every ranker votes its permutation with a
/// weight proportional to its own sequence score (shifted so the smallest
/// weight is >= 0), then positions are filled top-down with the
/// highest-voted unassigned item. Ties go to the lower item index.
Permutation fuse_weighted_majority(std::span<const RankerOutput> outputs,
                                   std::size_t length);

/// The permutation of the ranker with the highest own score; ties go to the
/// smaller lambda.
Permutation fuse_winner_takes_all(std::span<const RankerOutput> outputs);

/// The permutation of the ranker with the given lambda.
Permutation fuse_best_single(std::span<const RankerOutput> outputs, int lambda);

Permutation fuse(const FusionStrategy& strategy,
                 std::span<const RankerOutput> outputs, std::size_t length);

struct EnsembleRanking {
  Permutation fused;
  std::vector<RankerOutput> per_ranker;  // only rankers with lambda <= length
};

/// Runs every applicable ranker's greedy search (independent visited sets)
/// and fuses the results with the ensemble's strategy.
EnsembleRanking rank_with_ensemble(const std::vector<FeatureVector>& items,
                                   const Ensemble& ensemble,
                                   const SearchConfig& config);

}  // namespace midrank

#endif  // MIDRANK_FUSION_HPP_
