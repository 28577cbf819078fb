#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "midrank/rng.hpp"
#include "midrank/training.hpp"
#include "oracles.hpp"

using namespace midrank;

namespace {

Sequence make_sequence(std::string id, std::size_t len, std::size_t d,
                       std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  Sequence seq;
  seq.id = std::move(id);
  for (std::size_t i = 0; i < len; ++i) {
    FeatureVector v(d);
    for (double& x : v) x = gauss(rng);
    seq.items.push_back(l2_normalize(v));
  }
  std::vector<int> order(len);
  for (std::size_t i = 0; i < len; ++i) order[i] = static_cast<int>(i);
  shuffle_in_place(order, rng);
  seq.ground_truth = Permutation::from_order(std::move(order));
  return seq;
}

std::vector<TrainingSample> toy_problem(std::size_t n, std::size_t d,
                                        std::uint64_t seed) {
  // Linear concept with margin noise: labels follow sign(w.x) with a flip
  // chance, the usual soft-margin situation.
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  FeatureVector w(d);
  for (double& x : w) x = gauss(rng);
  w = l2_normalize(w);
  std::vector<TrainingSample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    TrainingSample s;
    s.x.resize(d);
    for (double& x : s.x) x = gauss(rng);
    const double margin = dot(w, s.x);
    s.y = margin >= 0.0 ? +1 : -1;
    if (uniform_below(rng, 10) == 0) s.y = -s.y;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace

TEST_SUITE_BEGIN("training");

TEST_CASE("sample_positives draws ground-truth-ordered windows") {
  Sequence seq = make_sequence("a", 8, 3, 41);
  auto positives = sample_positives(std::vector<Sequence>{seq}, 8, 1, 1);
  REQUIRE(positives.size() == 1);
  CHECK(positives[0].start == 0);
  CHECK(positives[0].label == +1);
  REQUIRE(positives[0].vectors.size() == 8);
  const Permutation& truth = *seq.ground_truth;
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(positives[0].vectors[k] ==
          seq.items[static_cast<std::size_t>(truth[k])]);
  }
}

TEST_CASE("sample_positives respects windows and counts") {
  Sequence seq = make_sequence("b", 20, 3, 42);
  auto positives = sample_positives(std::vector<Sequence>{seq}, 3, 5, 7);
  REQUIRE(positives.size() == 5);
  const Permutation& truth = *seq.ground_truth;
  std::set<std::size_t> starts;
  for (const auto& p : positives) {
    CHECK(p.lambda == 3);
    CHECK(p.start <= 17);
    starts.insert(p.start);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(p.vectors[k] ==
            seq.items[static_cast<std::size_t>(truth[p.start + k])]);
    }
  }
  CHECK(starts.size() == 5);  // distinct while the budget fits

  // More positives than windows: sampling continues with replacement.
  auto many = sample_positives(std::vector<Sequence>{seq}, 19, 6, 7);
  CHECK(many.size() == 6);
}

TEST_CASE("sample_positives error cases") {
  Sequence seq = make_sequence("c", 8, 3, 43);
  CHECK_THROWS_WITH_AS(
      (void)sample_positives(std::vector<Sequence>{seq}, 9, 1, 1),
      doctest::Contains("SequenceTooShort"), Error);

  Sequence no_truth = seq;
  no_truth.ground_truth.reset();
  CHECK_THROWS_WITH_AS(
      (void)sample_positives(std::vector<Sequence>{no_truth}, 3, 1, 1),
      doctest::Contains("MissingGroundTruth"), Error);
}

TEST_CASE("generate_negatives scrambles each positive once") {
  Sequence seq = make_sequence("d", 12, 3, 44);
  auto positives = sample_positives(std::vector<Sequence>{seq}, 3, 100, 3);
  auto negatives = generate_negatives(positives, 5);
  REQUIRE(negatives.size() == positives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const auto& pos = positives[i];
    const auto& neg = negatives[i];
    CHECK(neg.label == -1);
    CHECK(neg.parent_id == pos.parent_id);
    CHECK(neg.start == pos.start);
    CHECK(neg.vectors != pos.vectors);  // never the identity scramble
    // Same multiset of vectors.
    auto a = pos.vectors;
    auto b = neg.vectors;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("lambda=2 negatives are exactly the reversal") {
  Subsequence pos;
  pos.parent_id = "p";
  pos.start = 0;
  pos.lambda = 2;
  pos.label = +1;
  pos.vectors = {{1.0, 0.0}, {0.0, 1.0}};
  auto negatives = generate_negatives(std::vector<Subsequence>{pos}, 9);
  REQUIRE(negatives.size() == 1);
  CHECK(negatives[0].vectors ==
        std::vector<FeatureVector>{{0.0, 1.0}, {1.0, 0.0}});
}

TEST_CASE("lambda=3 scrambles stay within the 5 non-identity orders") {
  Subsequence pos;
  pos.parent_id = "p";
  pos.start = 0;
  pos.lambda = 3;
  pos.label = +1;
  pos.vectors = {{1.0}, {2.0}, {3.0}};
  std::set<std::vector<FeatureVector>> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto negatives = generate_negatives(std::vector<Subsequence>{pos}, seed);
    REQUIRE(negatives.size() == 1);
    CHECK(negatives[0].vectors != pos.vectors);
    seen.insert(negatives[0].vectors);
  }
  CHECK(seen.size() == 5);  // all of 3!-1 appear across seeds
}

TEST_CASE("1-D sdca matches the closed-form minimizer") {
  std::vector<TrainingSample> samples{{{+1.0}, +1, 1.0}, {{-1.0}, -1, 1.0}};
  TrainConfig config;
  config.mu = 1.0;
  config.sdca_epochs = 200;
  config.tolerance = 1e-10;
  auto trained = train_length_ranker(samples, config, 2);
  REQUIRE(trained.ranker.theta.size() == 1);
  // Objective 0.5 t^2 + 2 max(0, 1 - t) has its minimum at t = 1.
  CHECK(trained.ranker.theta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(trained.ranker.theta[0] > 0.0);
  for (const auto& s : samples) {
    const double hinge =
        std::max(0.0, 1.0 - s.y * trained.ranker.theta[0] * s.x[0]);
    CHECK(hinge < 1.0);
  }
  // Against an independent grid sweep of the same objective.
  const double oracle = oracles::grid_best_primal_1d(samples, 1.0, -4, 4, 100000);
  CHECK(trained.stats.primal == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("separable 2-D toy set reaches zero training error") {
  std::vector<TrainingSample> samples;
  auto rng = make_rng(45);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 60; ++i) {
    TrainingSample s;
    const double shift = (i % 2 == 0) ? 2.0 : -2.0;
    s.x = {shift + 0.3 * gauss(rng), 0.3 * gauss(rng)};
    s.y = (i % 2 == 0) ? +1 : -1;
    samples.push_back(std::move(s));
  }
  TrainConfig config;
  config.mu = 1e-3;
  config.sdca_epochs = 500;
  config.tolerance = 1e-8;
  auto trained = train_length_ranker(samples, config, 2);
  CHECK(zero_one_error(samples, trained.ranker.theta) == 0.0);

  const double oracle = oracles::subgradient_best_primal(samples, 1e-3);
  CHECK(trained.stats.primal == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("single-class data is rejected") {
  std::vector<TrainingSample> samples{{{1.0}, +1, 1.0}, {{0.5}, +1, 1.0}};
  TrainConfig config;
  CHECK_THROWS_WITH_AS((void)train_length_ranker(samples, config, 2),
                       doctest::Contains("DegenerateData"), Error);
}

TEST_CASE("sdca dual is monotone and gap closes") {
  auto samples = toy_problem(200, 5, 46);
  SdcaOptions options;
  options.mu = 1.0;
  options.max_epochs = 2000;
  options.tolerance = 1e-6;
  options.seed = 3;
  SdcaResult result = sdca_minimize(samples, options);
  CHECK(result.converged);
  CHECK(result.gap <= options.tolerance);
  CHECK(result.primal >= result.dual);
  for (std::size_t e = 1; e < result.dual_history.size(); ++e) {
    CHECK(result.dual_history[e] >= result.dual_history[e - 1]);
  }
}

TEST_CASE("sdca matches the subgradient oracle on a fixed toy problem") {
  auto samples = toy_problem(200, 5, 47);
  for (double mu : {1e-1, 1.0}) {
    SdcaOptions options;
    options.mu = mu;
    options.max_epochs = 4000;
    options.tolerance = 1e-7;
    SdcaResult result = sdca_minimize(samples, options);
    const double oracle = oracles::subgradient_best_primal(samples, mu);
    // The dual lower-bounds every primal value, the oracle's included.
    CHECK(oracle >= result.dual - 1e-6 * std::abs(result.dual));
    CHECK(std::abs(result.primal - oracle) / std::abs(oracle) < 1e-3);
  }
}

TEST_CASE("label symmetry: negating psi and labels preserves |decisions|") {
  auto samples = toy_problem(120, 4, 48);
  std::vector<TrainingSample> flipped = samples;
  for (auto& s : flipped) {
    for (double& x : s.x) x = -x;
    s.y = -s.y;
  }
  SdcaOptions options;
  options.mu = 1e-2;
  options.max_epochs = 300;
  options.tolerance = 1e-9;
  options.seed = 11;
  SdcaResult a = sdca_minimize(samples, options);
  SdcaResult b = sdca_minimize(flipped, options);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(std::abs(dot(a.theta, samples[i].x)) ==
          doctest::Approx(std::abs(dot(b.theta, flipped[i].x))).epsilon(1e-9));
  }
}

TEST_CASE("weighted hinge: doubling weights and mu rescales the objective") {
  // (2mu/2)||t||^2 + 2*sum hinge is twice the unweighted objective, so the
  // minimizer must not move.
  auto samples = toy_problem(80, 3, 49);
  std::vector<TrainingSample> doubled = samples;
  for (auto& s : doubled) s.weight = 2.0;
  SdcaOptions options;
  options.mu = 2e-2;
  options.max_epochs = 800;
  options.tolerance = 1e-9;
  SdcaResult a = sdca_minimize(doubled, options);
  SdcaOptions halved = options;
  halved.mu = 1e-2;
  halved.tolerance = 0.5e-9;
  SdcaResult b = sdca_minimize(samples, halved);
  CHECK(a.primal == doctest::Approx(2.0 * b.primal).epsilon(1e-6));
  for (std::size_t c = 0; c < a.theta.size(); ++c) {
    CHECK(a.theta[c] == doctest::Approx(b.theta[c]).epsilon(1e-4));
  }
}

TEST_CASE("train_ensemble covers the lambda range and the initializer") {
  std::vector<Sequence> seqs;
  for (int i = 0; i < 12; ++i) {
    seqs.push_back(make_sequence("s" + std::to_string(i), 10, 4,
                                 static_cast<std::uint64_t>(100 + i)));
  }
  TrainConfig config;
  config.lambda_range = {3, 4, 5};
  config.positives_per_sequence = 4;
  config.sdca_epochs = 60;
  Ensemble ensemble = train_ensemble(seqs, config);
  REQUIRE(ensemble.rankers.size() == 3);
  CHECK(ensemble.rankers[0].lambda == 3);
  CHECK(ensemble.rankers[2].lambda == 5);
  CHECK(ensemble.dim == 4);
  REQUIRE(ensemble.initializer.has_value());
  CHECK(ensemble.initializer->lambda == 2);
  CHECK_NOTHROW(validate(ensemble));

  TrainConfig pair_config = config;
  pair_config.lambda_range = {2};
  Ensemble baseline = train_ensemble(seqs, pair_config);
  CHECK(baseline.rankers.size() == 1);
  CHECK(baseline.initializer->theta == baseline.rankers[0].theta);

  TrainConfig bad = config;
  bad.lambda_range = {};
  CHECK_THROWS_WITH_AS((void)train_ensemble(seqs, bad),
                       doctest::Contains("EmptyLambdaRange"), Error);
}

TEST_CASE("short sequences are skipped, not fatal, when others remain") {
  std::vector<Sequence> seqs;
  seqs.push_back(make_sequence("long0", 9, 4, 7));
  seqs.push_back(make_sequence("long1", 9, 4, 8));
  seqs.push_back(make_sequence("short", 4, 4, 9));
  TrainConfig config;
  config.lambda_range = {6};
  config.positives_per_sequence = 4;
  config.sdca_epochs = 40;
  CHECK_NOTHROW((void)train_ensemble(seqs, config));

  TrainConfig too_big = config;
  too_big.lambda_range = {12};
  CHECK_THROWS_WITH_AS((void)train_ensemble(seqs, too_big),
                       doctest::Contains("SequenceTooShort"), Error);
}

TEST_SUITE_END();
