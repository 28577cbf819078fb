#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "midrank/model_io.hpp"
#include "midrank/rng.hpp"

using namespace midrank;

namespace {

Ensemble demo_ensemble(std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  Ensemble ensemble;
  ensemble.feature_map = FeatureMapKind::StackedDiff;
  ensemble.dim = 3;
  for (int lambda : {3, 4, 5}) {
    FeatureVector theta(psi_dim(ensemble.feature_map, lambda, 3));
    for (double& x : theta) x = gauss(rng);
    ensemble.rankers.push_back({lambda, ensemble.feature_map, theta});
  }
  FeatureVector init_theta(3);
  for (double& x : init_theta) x = gauss(rng);
  ensemble.initializer = LengthRanker{2, ensemble.feature_map, init_theta};
  ensemble.fusion = {FusionKind::BestSingle, 4};
  return ensemble;
}

}  // namespace

TEST_SUITE_BEGIN("model_io");

TEST_CASE("ensemble json round trip preserves theta bit-exactly") {
  Ensemble ensemble = demo_ensemble(71);
  const std::string text = ensemble_to_json(ensemble);
  Ensemble loaded = ensemble_from_json(text);
  CHECK(loaded.feature_map == ensemble.feature_map);
  CHECK(loaded.dim == ensemble.dim);
  REQUIRE(loaded.rankers.size() == ensemble.rankers.size());
  for (std::size_t i = 0; i < loaded.rankers.size(); ++i) {
    CHECK(loaded.rankers[i].lambda == ensemble.rankers[i].lambda);
    CHECK(loaded.rankers[i].theta == ensemble.rankers[i].theta);
  }
  REQUIRE(loaded.initializer.has_value());
  CHECK(loaded.initializer->theta == ensemble.initializer->theta);
  CHECK(loaded.fusion.kind == FusionKind::BestSingle);
  CHECK(loaded.fusion.best_lambda == 4);

  // Serialization is canonical: a second dump is identical.
  CHECK(ensemble_to_json(loaded) == text);
}

TEST_CASE("envelope carries the declared fields") {
  const std::string text = ensemble_to_json(demo_ensemble(72));
  CHECK(text.find("\"version\": 1") != std::string::npos);
  CHECK(text.find("\"feature_map\": \"stacked_diff\"") != std::string::npos);
  CHECK(text.find("\"d\": 3") != std::string::npos);
  CHECK(text.find("\"rankers\"") != std::string::npos);
  CHECK(text.find("\"lambda\": 3") != std::string::npos);
}

TEST_CASE("model files round trip on disk") {
  namespace fs = std::filesystem;
  const fs::path path =
      fs::temp_directory_path() / "midrank-model-roundtrip.json";
  Ensemble ensemble = demo_ensemble(73);
  save_ensemble(path.string(), ensemble);
  Ensemble loaded = load_ensemble(path.string());
  CHECK(loaded.rankers[1].theta == ensemble.rankers[1].theta);
  fs::remove(path);
}

TEST_CASE("bad model files are rejected") {
  CHECK_THROWS_WITH_AS((void)ensemble_from_json("not json"),
                       doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS((void)ensemble_from_json("{\"version\": 99}"),
                       doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(
      (void)ensemble_from_json(
          R"({"version": 1, "feature_map": "stacked", "d": 2, "rankers": []})"),
      doctest::Contains("EmptyRankings"), Error);
  CHECK_THROWS_WITH_AS((void)load_ensemble("/nonexistent/model.json"),
                       doctest::Contains("IoError"), Error);
}

TEST_SUITE_END();
