#include "midrank/ranker.hpp"

namespace midrank {

std::size_t ranker_input_dim(const LengthRanker& ranker) {
  const std::size_t unit = psi_dim(ranker.feature_map, ranker.lambda, 1);
  if (unit == 0 || ranker.theta.size() % unit != 0 || ranker.theta.empty()) {
    throw Error(errc::dimension_mismatch,
                "theta of size " + std::to_string(ranker.theta.size()) +
                    " does not match any input dim for lambda " +
                    std::to_string(ranker.lambda));
  }
  return ranker.theta.size() / unit;
}

void validate(const LengthRanker& ranker, std::size_t d) {
  if (ranker.lambda < 2) {
    throw Error(errc::lambda_too_small,
                "ranker lambda " + std::to_string(ranker.lambda));
  }
  if (!all_finite(ranker.theta)) {
    throw Error(errc::non_finite_entry, "ranker theta contains NaN/Inf");
  }
  if (ranker.theta.size() != psi_dim(ranker.feature_map, ranker.lambda, d)) {
    throw Error(errc::dimension_mismatch,
                "theta size " + std::to_string(ranker.theta.size()) +
                    " vs psi dim " +
                    std::to_string(psi_dim(ranker.feature_map, ranker.lambda, d)) +
                    " for input dim " + std::to_string(d));
  }
}

}  // namespace midrank
