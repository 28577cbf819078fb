#ifndef MIDRANK_RANKER_HPP_
#define MIDRANK_RANKER_HPP_

#include "midrank/feature_map.hpp"
#include "midrank/types.hpp"

namespace midrank {

/// Max-margin weight vector trained for one fixed subsequence length.
/// theta lives in the psi output space: theta.size() == psi_dim(feature_map,
/// lambda, d) for the input dimension d it was trained on.
struct LengthRanker {
  int lambda = 0;
  FeatureMapKind feature_map = FeatureMapKind::StackedDiff;
  FeatureVector theta;
};

/// Input dimension d implied by theta and the map; throws
/// dimension_mismatch when theta cannot correspond to any d.
std::size_t ranker_input_dim(const LengthRanker& ranker);

/// Checks theta is finite and consistent with (feature_map, lambda, d).
void validate(const LengthRanker& ranker, std::size_t d);

}  // namespace midrank

#endif  // MIDRANK_RANKER_HPP_
