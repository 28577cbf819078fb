#include "midrank/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "midrank/rng.hpp"

namespace midrank {

std::string to_string(FusionKind kind) {
  switch (kind) {
    case FusionKind::WeightedMajorityVote: return "weighted_majority_vote";
    case FusionKind::WinnerTakesAll: return "winner_takes_all";
    case FusionKind::BestSingle: return "best_single";
  }
  return "unknown";
}

FusionKind fusion_kind_from_string(const std::string& name) {
  if (name == "weighted_majority_vote" || name == "weighted") {
    return FusionKind::WeightedMajorityVote;
  }
  if (name == "winner_takes_all" || name == "wta") {
    return FusionKind::WinnerTakesAll;
  }
  if (name == "best_single") return FusionKind::BestSingle;
  throw Error(errc::parse_error, "unknown fusion strategy '" + name + "'");
}

void validate(const Ensemble& ensemble) {
  if (ensemble.rankers.empty()) {
    throw Error(errc::empty_rankings, "ensemble has no rankers");
  }
  int prev_lambda = 0;
  for (const auto& r : ensemble.rankers) {
    if (r.lambda <= prev_lambda) {
      throw Error(errc::invariant_violation,
                  "ensemble lambdas must be distinct and ascending");
    }
    prev_lambda = r.lambda;
    if (r.feature_map != ensemble.feature_map) {
      throw Error(errc::invariant_violation,
                  "ensemble rankers mix feature maps");
    }
    validate(r, ensemble.dim);
  }
  if (ensemble.initializer) {
    if (ensemble.initializer->lambda != 2) {
      throw Error(errc::invariant_violation, "initializer must have lambda=2");
    }
    validate(*ensemble.initializer, ensemble.dim);
  }
  if (ensemble.fusion.kind == FusionKind::BestSingle) {
    const int want = ensemble.fusion.best_lambda;
    const bool present =
        std::any_of(ensemble.rankers.begin(), ensemble.rankers.end(),
                    [want](const LengthRanker& r) { return r.lambda == want; });
    if (!present) {
      throw Error(errc::config_error, "best_single lambda " +
                                          std::to_string(want) +
                                          " not in ensemble");
    }
  }
}

namespace {

void check_outputs(std::span<const RankerOutput> outputs, std::size_t length) {
  if (outputs.empty()) {
    throw Error(errc::empty_rankings, "no rankings to fuse");
  }
  for (const auto& out : outputs) {
    if (out.perm.size() != length) {
      throw Error(errc::length_mismatch,
                  "ranking covers " + std::to_string(out.perm.size()) +
                      " items, expected " + std::to_string(length));
    }
  }
}

}  // namespace

Permutation fuse_weighted_majority(std::span<const RankerOutput> outputs,
                                   std::size_t length) {
  check_outputs(outputs, length);

  // Shift weights so they are all >= 0 without reordering them.
  double min_score = 0.0;
  for (const auto& out : outputs) min_score = std::min(min_score, out.score);
  std::vector<double> weights;
  weights.reserve(outputs.size());
  double max_weight = 0.0;
  for (const auto& out : outputs) {
    weights.push_back(out.score - min_score);
    max_weight = std::max(max_weight, weights.back());
  }
  if (max_weight == 0.0) {
    // Every weight collapsed to zero; fall back to unweighted voting so a
    // unanimous (or single) ranking still carries.
    std::fill(weights.begin(), weights.end(), 1.0);
  }

  // votes[item][position]
  std::vector<std::vector<double>> votes(length,
                                         std::vector<double>(length, 0.0));
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    const Permutation& perm = outputs[r].perm;
    for (std::size_t pos = 0; pos < length; ++pos) {
      votes[static_cast<std::size_t>(perm[pos])][pos] += weights[r];
    }
  }

  // Fill ranks top-down, each time taking the unassigned item with the
  // highest accumulated vote for that position (lower index wins ties).
  std::vector<bool> assigned(length, false);
  std::vector<int> order;
  order.reserve(length);
  for (std::size_t pos = 0; pos < length; ++pos) {
    std::size_t pick = length;
    double pick_votes = 0.0;
    for (std::size_t item = 0; item < length; ++item) {
      if (assigned[item]) continue;
      if (pick == length || votes[item][pos] > pick_votes) {
        pick = item;
        pick_votes = votes[item][pos];
      }
    }
    assigned[pick] = true;
    order.push_back(static_cast<int>(pick));
  }
  return Permutation::from_order(std::move(order));
}

Permutation fuse_winner_takes_all(std::span<const RankerOutput> outputs) {
  if (outputs.empty()) {
    throw Error(errc::empty_rankings, "no rankings to fuse");
  }
  const RankerOutput* winner = &outputs[0];
  for (const auto& out : outputs.subspan(1)) {
    if (out.score > winner->score ||
        (out.score == winner->score && out.lambda < winner->lambda)) {
      winner = &out;
    }
  }
  return winner->perm;
}

Permutation fuse_best_single(std::span<const RankerOutput> outputs,
                             int lambda) {
  for (const auto& out : outputs) {
    if (out.lambda == lambda) return out.perm;
  }
  throw Error(errc::empty_rankings,
              "no ranking from lambda " + std::to_string(lambda));
}

Permutation fuse(const FusionStrategy& strategy,
                 std::span<const RankerOutput> outputs, std::size_t length) {
  check_outputs(outputs, length);
  switch (strategy.kind) {
    case FusionKind::WeightedMajorityVote:
      return fuse_weighted_majority(outputs, length);
    case FusionKind::WinnerTakesAll:
      return fuse_winner_takes_all(outputs);
    case FusionKind::BestSingle:
      return fuse_best_single(outputs, strategy.best_lambda);
  }
  throw Error(errc::config_error, "unknown fusion strategy");
}

EnsembleRanking rank_with_ensemble(const std::vector<FeatureVector>& items,
                                   const Ensemble& ensemble,
                                   const SearchConfig& config) {
  validate(ensemble);
  const std::size_t length = items.size();

  const LengthRanker* pair_model =
      ensemble.initializer ? &*ensemble.initializer : nullptr;

  EnsembleRanking result;
  for (const auto& ranker : ensemble.rankers) {
    if (static_cast<std::size_t>(ranker.lambda) > length) continue;
    SearchConfig per_ranker = config;
    per_ranker.seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(ranker.lambda));
    RankResult r = rank(items, ranker, per_ranker, pair_model);
    result.per_ranker.push_back(
        {ranker.lambda, std::move(r.best), r.best_score, r.trace});
  }
  if (result.per_ranker.empty()) {
    throw Error(errc::lambda_exceeds_length,
                "no ranker in the ensemble fits a sequence of length " +
                    std::to_string(length));
  }
  result.fused = fuse(ensemble.fusion, result.per_ranker, length);
  return result;
}

}  // namespace midrank
