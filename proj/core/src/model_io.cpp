#include "midrank/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace midrank {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

json ranker_to_json(const LengthRanker& ranker) {
  return json{{"lambda", ranker.lambda}, {"theta", ranker.theta}};
}

LengthRanker ranker_from_json(const json& j, FeatureMapKind map) {
  LengthRanker r;
  r.lambda = j.at("lambda").get<int>();
  r.feature_map = map;
  r.theta = j.at("theta").get<FeatureVector>();
  return r;
}

}  // namespace

std::string ensemble_to_json(const Ensemble& ensemble) {
  validate(ensemble);
  json doc;
  doc["version"] = kModelVersion;
  doc["feature_map"] = to_string(ensemble.feature_map);
  doc["d"] = ensemble.dim;
  doc["rankers"] = json::array();
  for (const auto& r : ensemble.rankers) {
    doc["rankers"].push_back(ranker_to_json(r));
  }
  if (ensemble.initializer) {
    doc["initializer"] = ranker_to_json(*ensemble.initializer);
  }
  json fusion{{"kind", to_string(ensemble.fusion.kind)}};
  if (ensemble.fusion.best_lambda > 0) {
    fusion["best_lambda"] = ensemble.fusion.best_lambda;
  }
  doc["fusion"] = fusion;
  return doc.dump(2) + "\n";
}

Ensemble ensemble_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(errc::parse_error, "model file is not a JSON object");
  }
  try {
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      throw Error(errc::parse_error,
                  "unsupported model version " + std::to_string(version));
    }
    Ensemble ensemble;
    ensemble.feature_map =
        feature_map_from_string(doc.at("feature_map").get<std::string>());
    ensemble.dim = doc.at("d").get<std::size_t>();
    for (const auto& rj : doc.at("rankers")) {
      ensemble.rankers.push_back(ranker_from_json(rj, ensemble.feature_map));
    }
    if (doc.contains("initializer") && !doc["initializer"].is_null()) {
      ensemble.initializer = ranker_from_json(doc["initializer"], ensemble.feature_map);
    }
    if (doc.contains("fusion")) {
      ensemble.fusion.kind =
          fusion_kind_from_string(doc["fusion"].at("kind").get<std::string>());
      if (doc["fusion"].contains("best_lambda")) {
        ensemble.fusion.best_lambda = doc["fusion"]["best_lambda"].get<int>();
      }
    }
    validate(ensemble);
    return ensemble;
  } catch (const json::exception& e) {
    throw Error(errc::parse_error, std::string("model file: ") + e.what());
  }
}

void save_ensemble(const std::string& path, const Ensemble& ensemble) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  out << ensemble_to_json(ensemble);
  if (!out) {
    throw Error(errc::io_error, "write failed for '" + path + "'");
  }
}

Ensemble load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ensemble_from_json(buf.str());
}

}  // namespace midrank
