#ifndef MIDRANK_DATA_HPP_
#define MIDRANK_DATA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "midrank/types.hpp"

namespace midrank {

struct Dataset {
  std::size_t dim = 0;
  std::string split = "train";  // train | test
  std::vector<Sequence> sequences;
};

void validate(const Dataset& dataset);

/// JSON Lines on disk: a header line {"dim": d, "split": s}, then one
/// sequence per line {"id", "items", "order"} ("order" may be absent).
/// Paths ending in .gz read and write gzip transparently.
Dataset load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Dataset& dataset);

struct SyntheticConfig {
  std::size_t dim = 16;
  std::size_t num_sequences = 100;
  std::size_t seq_len = 8;
  /// Unit-norm scoring direction; left empty it is drawn from the seed.
  FeatureVector latent_direction;
  /// Std dev of the Gaussian noise added to each item's sort key. The noise
  /// perturbs only the ground-truth ordering, never the features, so it
  /// dials the attainable ranking accuracy directly.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string split = "train";
  std::string id_prefix = "seq";
};

/// Sequences of i.i.d. random unit vectors whose ground truth sorts items by
/// latent_direction . x plus key noise, descending. Deterministic per seed.
Dataset generate_synthetic(const SyntheticConfig& config);

/// Draws `count` sequences of the given length by subsampling items (without
/// replacement) from randomly chosen sequences of `dataset`; the induced
/// ground truth is the source sequence's order restricted to the subsample.
std::vector<Sequence> sample_test_sequences(const Dataset& dataset,
                                            std::size_t length,
                                            std::size_t count,
                                            std::uint64_t seed);

}  // namespace midrank

#endif  // MIDRANK_DATA_HPP_
