#ifndef MIDRANK_SDCA_HPP_
#define MIDRANK_SDCA_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "midrank/types.hpp"

namespace midrank {

/// One psi-mapped subsequence. `weight` carries the |delta| loss coefficient;
/// under the zero-one delta it is identically 1.
struct TrainingSample {
  FeatureVector x;
  int y = 0;            // +1 correct order, -1 scrambled
  double weight = 1.0;  // per-sample hinge weight, dual box upper bound
};

struct SdcaOptions {
  double mu = 1e-2;        // L2 regularization weight
  int max_epochs = 200;
  double tolerance = 1e-6; // duality-gap stop threshold
  std::uint64_t seed = 0;  // epoch shuffling stream
};

struct SdcaResult {
  FeatureVector theta;
  int epochs = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  bool converged = false;
  std::vector<double> dual_history;  // dual objective after each epoch
};

/// Minimizes (mu/2)||theta||^2 + sum_i w_i * max(0, 1 - y_i theta.x_i) by
/// stochastic dual coordinate ascent with closed-form hinge updates. The
/// dual objective is non-decreasing across epochs; iteration stops when the
/// duality gap drops to `tolerance` or the epoch budget runs out.
SdcaResult sdca_minimize(std::span<const TrainingSample> samples,
                         const SdcaOptions& options);

double sdca_primal_objective(std::span<const TrainingSample> samples,
                             const FeatureVector& theta, double mu);

/// Fraction of samples with y * theta.x <= 0 (margin sign errors).
double zero_one_error(std::span<const TrainingSample> samples,
                      const FeatureVector& theta);

}  // namespace midrank

#endif  // MIDRANK_SDCA_HPP_
