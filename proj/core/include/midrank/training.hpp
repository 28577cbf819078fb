#ifndef MIDRANK_TRAINING_HPP_
#define MIDRANK_TRAINING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "midrank/fusion.hpp"
#include "midrank/sdca.hpp"
#include "midrank/types.hpp"

namespace midrank {

struct TrainConfig {
  std::vector<int> lambda_range = {3, 4, 5, 6, 7, 8};
  int positives_per_sequence = 8;
  double mu = 1e-2;
  int sdca_epochs = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  FeatureMapKind feature_map = FeatureMapKind::StackedDiff;
  /// lambda=2 only: sample positives from every ordered pair instead of the
  /// adjacent windows, the classic pairwise-difference training set.
  bool ranksvm_all_pairs = false;
};

/// Draws `count_per_sequence` correctly ordered length-lambda windows from
/// each sequence's ground-truth ordering. Windows are distinct while the
/// budget allows, with replacement once it exceeds the window count.
std::vector<Subsequence> sample_positives(std::span<const Sequence> seqs,
                                          int lambda, int count_per_sequence,
                                          std::uint64_t seed);

/// lambda=2 variant over all ordered pairs (i before j in ground truth),
/// not just adjacent ones.
std::vector<Subsequence> sample_positive_pairs(std::span<const Sequence> seqs,
                                               int count_per_sequence,
                                               std::uint64_t seed);

/// One scrambled copy per positive: a permutation drawn uniformly from the
/// lambda!-1 non-identity orderings of the positive's vectors. Collisions
/// with negatives already drawn for the same window are resampled a few
/// times, then accepted.
std::vector<Subsequence> generate_negatives(
    std::span<const Subsequence> positives, std::uint64_t seed);

std::vector<TrainingSample> make_training_samples(
    std::span<const Subsequence> subsequences, FeatureMapKind kind);

struct TrainedRanker {
  LengthRanker ranker;
  SdcaResult stats;
};

/// Fits one max-margin ranker of the given length on psi-mapped samples.
TrainedRanker train_length_ranker(std::span<const TrainingSample> samples,
                                  const TrainConfig& config, int lambda);

/// Builds the positive/negative sample set for one lambda and fits the
/// ranker. Sequences shorter than lambda are skipped (a warning goes to
/// stderr); it is an error if none remain.
TrainedRanker train_for_lambda(std::span<const Sequence> seqs,
                               const TrainConfig& config, int lambda);

/// One ranker per lambda in config.lambda_range, each sampled and fitted
/// independently with seed+lambda derivation, plus the lambda=2 initializer
/// (reused from the range when present).
Ensemble train_ensemble(std::span<const Sequence> seqs,
                        const TrainConfig& config);

}  // namespace midrank

#endif  // MIDRANK_TRAINING_HPP_
