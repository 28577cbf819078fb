#include "midrank/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "midrank/rng.hpp"

namespace midrank {

std::size_t VisitedSet::Hash::operator()(
    const std::vector<int>& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

double signed_sqrt(double v) {
  return v < 0.0 ? -std::sqrt(-v) : std::sqrt(v);
}

void check_scorable(const std::vector<FeatureVector>& items,
                    const LengthRanker& ranker) {
  if (items.size() < 2) {
    throw Error(errc::too_short, "cannot rank fewer than 2 items");
  }
  if (static_cast<std::size_t>(ranker.lambda) > items.size()) {
    throw Error(errc::lambda_exceeds_length,
                "ranker lambda " + std::to_string(ranker.lambda) +
                    " exceeds sequence length " + std::to_string(items.size()));
  }
  validate(ranker, items[0].size());
}

std::uint64_t factorial_or_max(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > ~0ULL / k) return ~0ULL;
    f *= k;
  }
  return f;
}

}  // namespace

SequenceScorer::SequenceScorer(const std::vector<FeatureVector>& items,
                               const LengthRanker& ranker)
    : items_(items), ranker_(ranker) {
  check_scorable(items, ranker);
}

double SequenceScorer::operator()(const Permutation& perm) const {
  if (perm.size() != items_.size()) {
    throw Error(errc::length_mismatch,
                "permutation length " + std::to_string(perm.size()) +
                    " vs sequence length " + std::to_string(items_.size()));
  }
  const auto lambda = static_cast<std::size_t>(ranker_.lambda);
  const std::size_t windows = perm.size() - lambda + 1;
  const std::span<const int> order(perm.order());
  double total = 0.0;
  for (std::size_t j = 0; j < windows; ++j) {
    psi_gather(items_, order.subspan(j, lambda), ranker_.feature_map, buffer_);
    total += signed_sqrt(dot(ranker_.theta, buffer_));
  }
  return total;
}

double score_sequence(const std::vector<FeatureVector>& items,
                      const Permutation& perm, const LengthRanker& ranker) {
  return SequenceScorer(items, ranker)(perm);
}

std::vector<Permutation> pairswap_neighbors(const Permutation& perm) {
  const std::size_t n = perm.size();
  std::vector<Permutation> out;
  out.reserve(n * (n - 1) / 2);
  std::vector<int> order = perm.order();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::swap(order[i], order[j]);
      out.push_back(Permutation::from_order(order));
      std::swap(order[i], order[j]);
    }
  }
  return out;
}

GreedyResult greedy_search(const ScoreFunction& scorer, const Permutation& init,
                           VisitedSet& visited, int max_depth) {
  GreedyResult result{init, 0.0, {}};
  if (visited.insert(init)) ++result.trace.nodes_visited;
  double parent_score = scorer(init);
  Permutation parent = init;
  result.best = parent;
  result.best_score = parent_score;

  int depth = 0;
  while (depth < max_depth) {
    bool have_child = false;
    Permutation best_child = parent;
    double best_child_score = 0.0;
    for (Permutation& child : pairswap_neighbors(parent)) {
      if (!visited.insert(child)) continue;  // already scored in this call
      ++result.trace.nodes_visited;
      const double s = scorer(child);
      if (!have_child || s > best_child_score) {
        have_child = true;
        best_child = std::move(child);
        best_child_score = s;
      }
    }
    // Expansion requires strict improvement; ties end the tree.
    if (!have_child || best_child_score <= parent_score) break;
    parent = std::move(best_child);
    parent_score = best_child_score;
    ++depth;
    if (parent_score > result.best_score) {
      result.best = parent;
      result.best_score = parent_score;
    }
  }
  result.trace.depth_reached = depth;
  result.trace.best_score = result.best_score;
  return result;
}

RankResult rank(const std::vector<FeatureVector>& items,
                const LengthRanker& ranker, const SearchConfig& config,
                const LengthRanker* ranksvm) {
  check_scorable(items, ranker);
  if (config.num_trees < 1) {
    throw Error(errc::config_error, "num_trees must be >= 1");
  }
  const std::size_t length = items.size();
  const int max_depth =
      config.max_depth > 0 ? config.max_depth : static_cast<int>(length);

  SequenceScorer scorer(items, ranker);
  ScoreFunction score_fn = [&scorer](const Permutation& p) { return scorer(p); };

  auto rng = make_rng(derive_seed(config.seed, "restarts"));
  auto random_permutation = [&rng, length]() {
    std::vector<int> order(length);
    std::iota(order.begin(), order.end(), 0);
    shuffle_in_place(order, rng);
    return Permutation::from_order(std::move(order));
  };

  VisitedSet visited;
  const std::uint64_t total_perms = factorial_or_max(length);

  RankResult result;
  bool have_best = false;
  for (int tree = 0; tree < config.num_trees; ++tree) {
    Permutation init = Permutation::identity(length);
    if (tree == 0) {
      switch (config.initializer) {
        case SearchInit::RankSvm: {
          const LengthRanker* pair =
              ranksvm ? ranksvm : (ranker.lambda == 2 ? &ranker : nullptr);
          if (pair == nullptr) {
            throw Error(errc::config_error,
                        "RankSvm initialization needs a lambda=2 ranker");
          }
          init = ranksvm_init(items, *pair);
          break;
        }
        case SearchInit::Identity:
          break;
        case SearchInit::Random:
          init = random_permutation();
          break;
      }
    } else {
      // Restart trees must begin somewhere new; rejection-sample an
      // unvisited permutation, giving up once the space looks exhausted.
      if (visited.size() >= total_perms) break;
      bool found = false;
      for (int attempt = 0; attempt < 256 && !found; ++attempt) {
        Permutation candidate = random_permutation();
        if (!visited.contains(candidate)) {
          init = std::move(candidate);
          found = true;
        }
      }
      if (!found) break;
    }

    GreedyResult tree_result = greedy_search(score_fn, init, visited, max_depth);
    result.trace.nodes_visited += tree_result.trace.nodes_visited;
    result.trace.depth_reached =
        std::max(result.trace.depth_reached, tree_result.trace.depth_reached);
    ++result.trace.restarts_used;

    if (!have_best || tree_result.best_score > result.best_score) {
      have_best = true;
      result.best = std::move(tree_result.best);
      result.best_score = tree_result.best_score;
    }
  }
  result.trace.best_score = result.best_score;
  return result;
}

std::pair<Permutation, double> exhaustive_argmax(std::size_t length,
                                                 const ScoreFunction& scorer) {
  if (length < 2) {
    throw Error(errc::too_short, "cannot rank fewer than 2 items");
  }
  if (length > 9) {
    throw Error(errc::sequence_too_long_for_exhaustive,
                "refusing to enumerate " + std::to_string(length) +
                    "! permutations");
  }
  std::vector<int> order(length);
  std::iota(order.begin(), order.end(), 0);
  Permutation best = Permutation::from_order(order);
  double best_score = scorer(best);
  // Lexicographic enumeration with strict > keeps the smallest order on ties.
  while (std::next_permutation(order.begin(), order.end())) {
    Permutation candidate = Permutation::from_order(order);
    const double s = scorer(candidate);
    if (s > best_score) {
      best = std::move(candidate);
      best_score = s;
    }
  }
  return {best, best_score};
}

std::pair<Permutation, double> exhaustive_rank(
    const std::vector<FeatureVector>& items, const LengthRanker& ranker) {
  check_scorable(items, ranker);
  SequenceScorer scorer(items, ranker);
  return exhaustive_argmax(
      items.size(), [&scorer](const Permutation& p) { return scorer(p); });
}

Permutation ranksvm_init(const std::vector<FeatureVector>& items,
                         const LengthRanker& pair_ranker) {
  if (pair_ranker.lambda != 2) {
    throw Error(errc::lambda_out_of_range,
                "ranksvm_init needs lambda=2, got " +
                    std::to_string(pair_ranker.lambda));
  }
  if (items.size() < 2) {
    throw Error(errc::too_short, "cannot rank fewer than 2 items");
  }
  const std::size_t d = items[0].size();
  validate(pair_ranker, d);

  // theta.(x_i - x_j) > 0 iff proj.x_i > proj.x_j, where proj is theta for
  // difference maps and theta_head - theta_tail for the stacked map.
  FeatureVector proj(d, 0.0);
  if (pair_ranker.feature_map == FeatureMapKind::Stacked) {
    for (std::size_t c = 0; c < d; ++c) {
      proj[c] = pair_ranker.theta[c] - pair_ranker.theta[d + c];
    }
  } else {
    proj = pair_ranker.theta;
  }

  std::vector<double> scores(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].size() != d) {
      throw Error(errc::dimension_mismatch, "sequence items mix dims");
    }
    scores[i] = dot(proj, items[i]);
  }
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&scores](int a, int b) {
    return scores[static_cast<std::size_t>(a)] >
           scores[static_cast<std::size_t>(b)];
  });
  return Permutation::from_order(std::move(order));
}

}  // namespace midrank
