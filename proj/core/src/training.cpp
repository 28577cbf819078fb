#include "midrank/training.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "midrank/rng.hpp"

namespace midrank {

namespace {

void require_ground_truth(const Sequence& seq) {
  if (!seq.ground_truth) {
    throw Error(errc::missing_ground_truth,
                "sequence '" + seq.id + "' has no ground-truth order");
  }
}

// Draws `count` window starts out of [0, available): distinct while count
// fits, uniform with replacement beyond that.
std::vector<std::size_t> draw_starts(std::size_t available, int count,
                                     std::mt19937_64& rng) {
  std::vector<std::size_t> starts;
  starts.reserve(static_cast<std::size_t>(count));
  if (static_cast<std::size_t>(count) <= available) {
    std::vector<std::size_t> pool(available);
    std::iota(pool.begin(), pool.end(), 0);
    for (int k = 0; k < count; ++k) {
      const std::size_t j =
          static_cast<std::size_t>(uniform_below(rng, available - k)) + k;
      std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
      starts.push_back(pool[static_cast<std::size_t>(k)]);
    }
  } else {
    for (int k = 0; k < count; ++k) {
      starts.push_back(static_cast<std::size_t>(uniform_below(rng, available)));
    }
  }
  return starts;
}

}  // namespace

std::vector<Subsequence> sample_positives(std::span<const Sequence> seqs,
                                          int lambda, int count_per_sequence,
                                          std::uint64_t seed) {
  if (count_per_sequence < 1) {
    throw Error(errc::config_error, "positives_per_sequence must be >= 1");
  }
  auto rng = make_rng(derive_seed(seed, "positives"));
  std::vector<Subsequence> out;
  for (const Sequence& seq : seqs) {
    require_ground_truth(seq);
    if (seq.length() < static_cast<std::size_t>(lambda)) {
      throw Error(errc::sequence_too_short,
                  "sequence '" + seq.id + "' of length " +
                      std::to_string(seq.length()) + " cannot host lambda " +
                      std::to_string(lambda));
    }
    const auto windows = consecutive_subsequences(seq.length(), lambda);
    const Permutation& truth = *seq.ground_truth;
    for (std::size_t start : draw_starts(windows.size(), count_per_sequence, rng)) {
      Subsequence sub;
      sub.parent_id = seq.id;
      sub.start = start;
      sub.lambda = lambda;
      sub.label = +1;
      sub.vectors.reserve(static_cast<std::size_t>(lambda));
      for (int k = 0; k < lambda; ++k) {
        sub.vectors.push_back(
            seq.items[static_cast<std::size_t>(truth[start + static_cast<std::size_t>(k)])]);
      }
      out.push_back(std::move(sub));
    }
  }
  return out;
}

std::vector<Subsequence> sample_positive_pairs(std::span<const Sequence> seqs,
                                               int count_per_sequence,
                                               std::uint64_t seed) {
  if (count_per_sequence < 1) {
    throw Error(errc::config_error, "positives_per_sequence must be >= 1");
  }
  auto rng = make_rng(derive_seed(seed, "positive-pairs"));
  std::vector<Subsequence> out;
  for (const Sequence& seq : seqs) {
    require_ground_truth(seq);
    const std::size_t n = seq.length();
    const std::size_t pairs = n * (n - 1) / 2;
    const Permutation& truth = *seq.ground_truth;
    for (std::size_t flat : draw_starts(pairs, count_per_sequence, rng)) {
      // Decode the flat pair index into ranks r1 < r2.
      std::size_t r1 = 0;
      std::size_t remaining = flat;
      while (remaining >= n - 1 - r1) {
        remaining -= n - 1 - r1;
        ++r1;
      }
      const std::size_t r2 = r1 + 1 + remaining;
      Subsequence sub;
      sub.parent_id = seq.id;
      sub.start = r1 * n + r2;  // unique key per pair, not a window offset
      sub.lambda = 2;
      sub.label = +1;
      sub.vectors = {seq.items[static_cast<std::size_t>(truth[r1])],
                     seq.items[static_cast<std::size_t>(truth[r2])]};
      out.push_back(std::move(sub));
    }
  }
  return out;
}

std::vector<Subsequence> generate_negatives(
    std::span<const Subsequence> positives, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, "scramble"));
  std::unordered_map<std::string, std::unordered_set<std::string>> used;
  std::vector<Subsequence> out;
  out.reserve(positives.size());

  for (const Subsequence& pos : positives) {
    if (pos.lambda < 2) {
      throw Error(errc::lambda_too_small,
                  "cannot scramble a subsequence of lambda " +
                      std::to_string(pos.lambda));
    }
    if (pos.label != +1) {
      throw Error(errc::invariant_violation,
                  "generate_negatives expects positives only");
    }
    const auto lambda = static_cast<std::size_t>(pos.lambda);
    const std::string key = pos.parent_id + ":" + std::to_string(pos.start);
    auto& seen = used[key];

    std::vector<int> scramble(lambda);
    std::string encoded;
    for (int attempt = 0; attempt < 10; ++attempt) {
      // Uniform over the lambda!-1 non-identity permutations.
      do {
        std::iota(scramble.begin(), scramble.end(), 0);
        shuffle_in_place(scramble, rng);
      } while (std::is_sorted(scramble.begin(), scramble.end()));
      encoded.clear();
      for (int v : scramble) {
        encoded += std::to_string(v);
        encoded += ',';
      }
      if (!seen.count(encoded)) break;  // collision: resample, then give in
    }
    seen.insert(encoded);

    Subsequence neg;
    neg.parent_id = pos.parent_id;
    neg.start = pos.start;
    neg.lambda = pos.lambda;
    neg.label = -1;
    neg.vectors.reserve(lambda);
    for (std::size_t k = 0; k < lambda; ++k) {
      neg.vectors.push_back(pos.vectors[static_cast<std::size_t>(scramble[k])]);
    }
    out.push_back(std::move(neg));
  }
  return out;
}

std::vector<TrainingSample> make_training_samples(
    std::span<const Subsequence> subsequences, FeatureMapKind kind) {
  std::vector<TrainingSample> samples;
  samples.reserve(subsequences.size());
  for (const Subsequence& sub : subsequences) {
    TrainingSample s;
    s.x = psi(std::span<const FeatureVector>(sub.vectors), kind);
    s.y = sub.label;
    s.weight = 1.0;  // zero-one delta: |delta| == 1
    samples.push_back(std::move(s));
  }
  return samples;
}

TrainedRanker train_length_ranker(std::span<const TrainingSample> samples,
                                  const TrainConfig& config, int lambda) {
  SdcaOptions options;
  options.mu = config.mu;
  options.max_epochs = config.sdca_epochs;
  options.tolerance = config.tolerance;
  options.seed = derive_seed(config.seed + static_cast<std::uint64_t>(lambda),
                             "sdca");
  SdcaResult stats = sdca_minimize(samples, options);
  LengthRanker ranker{lambda, config.feature_map, stats.theta};
  return {std::move(ranker), std::move(stats)};
}

TrainedRanker train_for_lambda(std::span<const Sequence> seqs,
                               const TrainConfig& config, int lambda) {
  std::vector<Sequence> eligible;
  std::size_t skipped = 0;
  for (const Sequence& seq : seqs) {
    if (seq.length() >= static_cast<std::size_t>(lambda)) {
      eligible.push_back(seq);
    } else {
      ++skipped;
    }
  }
  if (skipped > 0) {
    std::cerr << "warning: skipping " << skipped << " of " << seqs.size()
              << " training sequences shorter than lambda " << lambda << "\n";
  }
  if (eligible.empty()) {
    throw Error(errc::sequence_too_short,
                "no training sequence is long enough for lambda " +
                    std::to_string(lambda));
  }

  const std::uint64_t lambda_seed =
      config.seed + static_cast<std::uint64_t>(lambda);
  std::vector<Subsequence> positives =
      (lambda == 2 && config.ranksvm_all_pairs)
          ? sample_positive_pairs(eligible, config.positives_per_sequence,
                                  lambda_seed)
          : sample_positives(eligible, lambda, config.positives_per_sequence,
                             lambda_seed);
  std::vector<Subsequence> negatives = generate_negatives(positives, lambda_seed);

  std::vector<TrainingSample> samples =
      make_training_samples(positives, config.feature_map);
  std::vector<TrainingSample> neg_samples =
      make_training_samples(negatives, config.feature_map);
  samples.insert(samples.end(), std::make_move_iterator(neg_samples.begin()),
                 std::make_move_iterator(neg_samples.end()));

  return train_length_ranker(samples, config, lambda);
}

Ensemble train_ensemble(std::span<const Sequence> seqs,
                        const TrainConfig& config) {
  if (config.lambda_range.empty()) {
    throw Error(errc::empty_lambda_range, "lambda_range is empty");
  }
  if (seqs.empty()) {
    throw Error(errc::degenerate_data, "no training sequences");
  }
  std::vector<int> lambdas = config.lambda_range;
  std::sort(lambdas.begin(), lambdas.end());
  if (std::adjacent_find(lambdas.begin(), lambdas.end()) != lambdas.end()) {
    throw Error(errc::invariant_violation, "lambda_range contains duplicates");
  }
  if (lambdas.front() < 2) {
    throw Error(errc::lambda_too_small, "lambda_range values must be >= 2");
  }

  const std::size_t d = seqs[0].dim();
  for (const Sequence& seq : seqs) {
    validate(seq);
    if (seq.dim() != d) {
      throw Error(errc::dimension_mismatch, "training sequences mix dims");
    }
  }

  Ensemble ensemble;
  ensemble.feature_map = config.feature_map;
  ensemble.dim = d;
  for (int lambda : lambdas) {
    ensemble.rankers.push_back(train_for_lambda(seqs, config, lambda).ranker);
  }

  if (lambdas.front() == 2) {
    ensemble.initializer = ensemble.rankers.front();
  } else {
    ensemble.initializer = train_for_lambda(seqs, config, 2).ranker;
  }
  return ensemble;
}

}  // namespace midrank
