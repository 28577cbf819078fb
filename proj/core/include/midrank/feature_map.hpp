#ifndef MIDRANK_FEATURE_MAP_HPP_
#define MIDRANK_FEATURE_MAP_HPP_

#include <span>
#include <string>

#include "midrank/types.hpp"

namespace midrank {

/// Vector representation of an ordered subsequence.
///
/// MeanPairwiseDiff  average of x_i - x_j over all ordered pairs (i before j)
/// Stacked           concatenation of the vectors in order
/// StackedDiff       concatenation of the lambda-1 adjacent differences
/// FullPairwiseDiff  concatenation of all ordered pair differences; kept for
///                   ablations only and excluded from the defaults
enum class FeatureMapKind {
  MeanPairwiseDiff,
  Stacked,
  StackedDiff,
  FullPairwiseDiff,
};

std::string to_string(FeatureMapKind kind);
FeatureMapKind feature_map_from_string(const std::string& name);

/// Output dimensionality for a length-lambda input of dimension d.
std::size_t psi_dim(FeatureMapKind kind, int lambda, std::size_t d);

/// psi(X, Y): map an ordered subsequence to its feature representation.
/// The input spans the vectors already arranged in candidate order.
FeatureVector psi(std::span<const FeatureVector> ordered, FeatureMapKind kind);

/// Gather-and-map variant used by the inference hot path: applies psi to
/// items[order[0]], ..., items[order[lambda-1]] without copying them first.
/// `out` is resized to the map dimension.
void psi_gather(const std::vector<FeatureVector>& items,
                std::span<const int> order, FeatureMapKind kind,
                FeatureVector& out);

}  // namespace midrank

#endif  // MIDRANK_FEATURE_MAP_HPP_
