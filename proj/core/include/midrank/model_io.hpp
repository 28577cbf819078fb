#ifndef MIDRANK_MODEL_IO_HPP_
#define MIDRANK_MODEL_IO_HPP_

#include <string>

#include "midrank/fusion.hpp"

namespace midrank {

/// Versioned JSON envelope {version, feature_map, d, rankers: [{lambda,
/// theta}]}. Theta values round-trip exactly through the decimal encoding.
/// The optional "initializer" and "fusion" fields persist the lambda=2
/// search seed model and the configured fusion strategy.
std::string ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const std::string& text);

void save_ensemble(const std::string& path, const Ensemble& ensemble);
Ensemble load_ensemble(const std::string& path);

}  // namespace midrank

#endif  // MIDRANK_MODEL_IO_HPP_
