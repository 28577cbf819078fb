#include "midrank/sdca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "midrank/rng.hpp"

namespace midrank {

namespace {

void check_samples(std::span<const TrainingSample> samples) {
  if (samples.empty()) {
    throw Error(errc::degenerate_data, "no training samples");
  }
  bool has_pos = false, has_neg = false;
  const std::size_t d = samples[0].x.size();
  for (const auto& s : samples) {
    if (s.y != +1 && s.y != -1) {
      throw Error(errc::invariant_violation,
                  "sample label must be +1 or -1, got " + std::to_string(s.y));
    }
    if (s.weight < 0.0 || !std::isfinite(s.weight)) {
      throw Error(errc::invariant_violation, "sample weight must be finite >= 0");
    }
    if (s.x.size() != d) {
      throw Error(errc::dimension_mismatch, "samples mix feature dims");
    }
    if (!all_finite(s.x)) {
      throw Error(errc::non_finite_entry, "sample features contain NaN/Inf");
    }
    (s.y > 0 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw Error(errc::degenerate_data,
                "need both correctly ordered and scrambled samples");
  }
}

double dual_objective(const std::vector<double>& alpha,
                      const FeatureVector& theta, double mu) {
  double alpha_sum = 0.0;
  for (double a : alpha) alpha_sum += a;
  double theta_sq = 0.0;
  for (double t : theta) theta_sq += t * t;
  return alpha_sum - 0.5 * mu * theta_sq;
}

}  // namespace

double sdca_primal_objective(std::span<const TrainingSample> samples,
                             const FeatureVector& theta, double mu) {
  double theta_sq = 0.0;
  for (double t : theta) theta_sq += t * t;
  double loss = 0.0;
  for (const auto& s : samples) {
    const double margin = static_cast<double>(s.y) * dot(theta, s.x);
    loss += s.weight * std::max(0.0, 1.0 - margin);
  }
  return 0.5 * mu * theta_sq + loss;
}

double zero_one_error(std::span<const TrainingSample> samples,
                      const FeatureVector& theta) {
  if (samples.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& s : samples) {
    if (static_cast<double>(s.y) * dot(theta, s.x) <= 0.0) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

SdcaResult sdca_minimize(std::span<const TrainingSample> samples,
                         const SdcaOptions& options) {
  check_samples(samples);
  if (options.mu <= 0.0 || !std::isfinite(options.mu)) {
    throw Error(errc::config_error, "mu must be > 0");
  }

  const std::size_t n = samples.size();
  const std::size_t d = samples[0].x.size();
  const double mu = options.mu;

  std::vector<double> norm_sq(n);
  std::vector<double> alpha(n, 0.0);
  FeatureVector theta(d, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : samples[i].x) s += v * v;
    norm_sq[i] = s;
    // Zero-feature samples contribute a constant hinge of weight w_i; their
    // dual optimum sits at the box bound and never moves theta.
    if (s == 0.0) alpha[i] = samples[i].weight;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(derive_seed(options.seed, "sdca-order"));

  SdcaResult result;
  result.dual_history.reserve(static_cast<std::size_t>(options.max_epochs));

  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    shuffle_in_place(order, rng);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      if (norm_sq[i] == 0.0) continue;
      const TrainingSample& s = samples[i];
      const double margin = static_cast<double>(s.y) * dot(theta, s.x);
      // Exact maximizer of the dual along coordinate i, clipped to the box.
      const double candidate = alpha[i] + mu * (1.0 - margin) / norm_sq[i];
      const double clipped = std::clamp(candidate, 0.0, s.weight);
      const double delta = clipped - alpha[i];
      if (delta != 0.0) {
        const double scale = delta * static_cast<double>(s.y) / mu;
        for (std::size_t c = 0; c < d; ++c) theta[c] += scale * s.x[c];
        alpha[i] = clipped;
      }
    }
    result.epochs = epoch + 1;
    result.dual = dual_objective(alpha, theta, mu);
    result.dual_history.push_back(result.dual);
    result.primal = sdca_primal_objective(samples, theta, mu);
    result.gap = result.primal - result.dual;
    if (result.gap <= options.tolerance) {
      result.converged = true;
      break;
    }
  }

  if (!all_finite(theta) || !std::isfinite(result.primal)) {
    throw Error(errc::non_finite_loss, "training diverged to NaN/Inf");
  }
  result.theta = std::move(theta);
  return result;
}

}  // namespace midrank
