#include "midrank/feature_map.hpp"

#include <cstddef>

namespace midrank {

std::string to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::MeanPairwiseDiff: return "mean_pairwise_diff";
    case FeatureMapKind::Stacked: return "stacked";
    case FeatureMapKind::StackedDiff: return "stacked_diff";
    case FeatureMapKind::FullPairwiseDiff: return "full_pairwise_diff";
  }
  return "unknown";
}

FeatureMapKind feature_map_from_string(const std::string& name) {
  if (name == "mean_pairwise_diff") return FeatureMapKind::MeanPairwiseDiff;
  if (name == "stacked") return FeatureMapKind::Stacked;
  if (name == "stacked_diff") return FeatureMapKind::StackedDiff;
  if (name == "full_pairwise_diff") return FeatureMapKind::FullPairwiseDiff;
  throw Error(errc::parse_error, "unknown feature map '" + name + "'");
}

std::size_t psi_dim(FeatureMapKind kind, int lambda, std::size_t d) {
  if (lambda < 2) {
    throw Error(errc::too_short,
                "feature maps need lambda >= 2, got " + std::to_string(lambda));
  }
  const auto l = static_cast<std::size_t>(lambda);
  switch (kind) {
    case FeatureMapKind::MeanPairwiseDiff: return d;
    case FeatureMapKind::Stacked: return l * d;
    case FeatureMapKind::StackedDiff: return (l - 1) * d;
    case FeatureMapKind::FullPairwiseDiff: return l * (l - 1) / 2 * d;
  }
  return 0;
}

namespace {

// Core mapping over an indexable view: at(k) is the k-th vector of the
// ordered subsequence.
template <typename At>
void psi_impl(const At& at, int lambda, std::size_t d, FeatureMapKind kind,
              FeatureVector& out) {
  const auto l = static_cast<std::size_t>(lambda);
  out.assign(psi_dim(kind, lambda, d), 0.0);
  switch (kind) {
    case FeatureMapKind::MeanPairwiseDiff: {
      // Summing x_i - x_j over all ordered pairs puts weight
      // (lambda - 1 - 2k) on the k-th vector.
      const double pairs = static_cast<double>(l * (l - 1) / 2);
      for (std::size_t k = 0; k < l; ++k) {
        const double coeff =
            static_cast<double>(l - 1) - 2.0 * static_cast<double>(k);
        const FeatureVector& x = at(k);
        for (std::size_t c = 0; c < d; ++c) out[c] += coeff * x[c];
      }
      for (std::size_t c = 0; c < d; ++c) out[c] /= pairs;
      break;
    }
    case FeatureMapKind::Stacked: {
      for (std::size_t k = 0; k < l; ++k) {
        const FeatureVector& x = at(k);
        for (std::size_t c = 0; c < d; ++c) out[k * d + c] = x[c];
      }
      break;
    }
    case FeatureMapKind::StackedDiff: {
      for (std::size_t k = 0; k + 1 < l; ++k) {
        const FeatureVector& a = at(k);
        const FeatureVector& b = at(k + 1);
        for (std::size_t c = 0; c < d; ++c) out[k * d + c] = a[c] - b[c];
      }
      break;
    }
    case FeatureMapKind::FullPairwiseDiff: {
      std::size_t block = 0;
      for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j, ++block) {
          const FeatureVector& a = at(i);
          const FeatureVector& b = at(j);
          for (std::size_t c = 0; c < d; ++c) out[block * d + c] = a[c] - b[c];
        }
      }
      break;
    }
  }
}

}  // namespace

FeatureVector psi(std::span<const FeatureVector> ordered, FeatureMapKind kind) {
  if (ordered.size() < 2) {
    throw Error(errc::too_short, "psi needs at least 2 vectors, got " +
                                     std::to_string(ordered.size()));
  }
  const std::size_t d = ordered[0].size();
  for (const auto& v : ordered) {
    if (v.size() != d) {
      throw Error(errc::dimension_mismatch,
                  "psi input mixes dims " + std::to_string(d) + " and " +
                      std::to_string(v.size()));
    }
  }
  FeatureVector out;
  psi_impl([&](std::size_t k) -> const FeatureVector& { return ordered[k]; },
           static_cast<int>(ordered.size()), d, kind, out);
  return out;
}

void psi_gather(const std::vector<FeatureVector>& items,
                std::span<const int> order, FeatureMapKind kind,
                FeatureVector& out) {
  if (order.size() < 2) {
    throw Error(errc::too_short, "psi needs at least 2 vectors, got " +
                                     std::to_string(order.size()));
  }
  const std::size_t d = items.empty() ? 0 : items[0].size();
  psi_impl(
      [&](std::size_t k) -> const FeatureVector& {
        return items[static_cast<std::size_t>(order[k])];
      },
      static_cast<int>(order.size()), d, kind, out);
}

}  // namespace midrank
