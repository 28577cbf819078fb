#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "midrank/data.hpp"
#include "midrank/model_io.hpp"

using namespace midrank;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// The CLI binary path arrives through the environment (set by ctest).
std::string cli_bin() {
  const char* bin = std::getenv("MIDRANK_CLI_BIN");
  if (bin == nullptr || *bin == '\0') return {};
  return bin;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() /
          ("midrank-cli-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workspace() { std::error_code ec; fs::remove_all(dir, ec); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("cli end-to-end workflow") {
  const std::string bin = cli_bin();
  if (bin.empty()) {
    MESSAGE("MIDRANK_CLI_BIN not set; skipping CLI tests");
    return;
  }
  Workspace ws;
  const std::string train_path = ws.file("train.jsonl");
  const std::string test_path = ws.file("test.jsonl");

  SUBCASE("generate is deterministic and validates config") {
    const std::string cmd = bin + " generate --out-train " + train_path +
                            " --out-test " + test_path +
                            " --dim 6 --train-sequences 8 --test-sequences 6" +
                            " --train-len 9 --test-len 5 --noise-sigma 0.1" +
                            " --seed 7 > /dev/null";
    REQUIRE(run(cmd) == 0);
    const std::string first_train = slurp(train_path);
    const std::string first_test = slurp(test_path);
    REQUIRE(run(cmd) == 0);
    CHECK(slurp(train_path) == first_train);
    CHECK(slurp(test_path) == first_test);

    Dataset loaded = load_dataset(train_path);
    CHECK(loaded.dim == 6);
    CHECK(loaded.sequences.size() == 8);

    // Negative sigma is a configuration error: exit 1.
    CHECK(run(bin + " generate --out-train " + ws.file("x.jsonl") +
              " --out-test " + ws.file("y.jsonl") +
              " --noise-sigma -1 --dim 4 --train-sequences 2"
              " --test-sequences 2 --train-len 4 --test-len 4"
              " 2> /dev/null") == 1);
  }

  SUBCASE("train, rank, evaluate round trip") {
    REQUIRE(run(bin + " generate --out-train " + train_path + " --out-test " +
                test_path +
                " --dim 6 --train-sequences 20 --test-sequences 10"
                " --train-len 9 --test-len 6 --noise-sigma 0.15 --seed 3"
                " > /dev/null") == 0);

    const std::string model = ws.file("model.json");
    const std::string report = ws.file("report.json");
    REQUIRE(run(bin + " train --data " + train_path + " --model " + model +
                " --report " + report +
                " --lambdas 3,4 --positives 4 --epochs 60 --cv-folds 2"
                " --mu-grid 1e-3,1e-1 --seed 3 > /dev/null") == 0);

    Ensemble ensemble = load_ensemble(model);
    CHECK(ensemble.rankers.size() == 2);
    CHECK(ensemble.initializer.has_value());

    json report_doc = json::parse(slurp(report));
    CHECK(report_doc.contains("per_lambda"));
    CHECK(report_doc["per_lambda"].size() == 3);  // initializer + 2 lambdas
    CHECK(report_doc.contains("best_single_lambda"));

    const std::string ranks = ws.file("ranks.jsonl");
    REQUIRE(run(bin + " rank --model " + model + " --data " + test_path +
                " --out " + ranks + " --all-fusions --seed 5") == 0);
    std::istringstream lines(slurp(ranks));
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(json::parse(line).contains("config"));
    std::size_t count = 0;
    while (std::getline(lines, line)) {
      json entry = json::parse(line);
      CHECK(entry.contains("permutation"));
      CHECK(entry.contains("fusions"));
      ++count;
    }
    CHECK(count == 10);

    const std::string csv = ws.file("eval.csv");
    const std::string ejson = ws.file("eval.json");
    REQUIRE(run(bin + " evaluate --model " + model + " --data " + test_path +
                " --out-csv " + csv + " --out-json " + ejson +
                " --ablate-lambda --all-fusions --seed 5 > /dev/null") == 0);
    const std::string csv_text = slurp(csv);
    CHECK(csv_text.starts_with("method,ndcg,kt,pair_acc,n_sequences"));
    CHECK(csv_text.find("lambda=3") != std::string::npos);
    CHECK(csv_text.find("lambda=4") != std::string::npos);
    CHECK(csv_text.find("winner_takes_all") != std::string::npos);
    json eval_doc = json::parse(slurp(ejson));
    CHECK(eval_doc.contains("rows"));
    CHECK(eval_doc["config"]["seed"] == 5);
  }

  SUBCASE("rank reports per-sequence errors but keeps going") {
    REQUIRE(run(bin + " generate --out-train " + train_path + " --out-test " +
                test_path +
                " --dim 5 --train-sequences 10 --test-sequences 4"
                " --train-len 8 --test-len 6 --seed 11 > /dev/null") == 0);
    const std::string model = ws.file("model.json");
    REQUIRE(run(bin + " train --data " + train_path + " --model " + model +
                " --lambdas 4 --positives 3 --epochs 40 --mu 0.01 --seed 11"
                " > /dev/null") == 0);

    // Append a sequence shorter than every lambda in the model.
    Dataset data = load_dataset(test_path);
    Sequence tiny;
    tiny.id = "tiny";
    tiny.items = {FeatureVector{1, 0, 0, 0, 0}, FeatureVector{0, 1, 0, 0, 0}};
    tiny.ground_truth = make_permutation({0, 1});
    data.sequences.push_back(tiny);
    save_dataset(test_path, data);

    const std::string ranks = ws.file("ranks.jsonl");
    REQUIRE(run(bin + " rank --model " + model + " --data " + test_path +
                " --out " + ranks + " --seed 2") == 0);
    std::istringstream lines(slurp(ranks));
    std::string line;
    std::getline(lines, line);  // config header
    std::size_t ok = 0, failed = 0;
    while (std::getline(lines, line)) {
      json entry = json::parse(line);
      if (entry.contains("error")) {
        ++failed;
        CHECK(entry["id"] == "tiny");
      } else {
        ++ok;
      }
    }
    CHECK(ok == 4);
    CHECK(failed == 1);
  }

  SUBCASE("missing inputs exit with the data error code") {
    CHECK(run(bin + " train --data " + ws.file("absent.jsonl") +
              " --model " + ws.file("m.json") + " 2> " + ws.file("err.txt")) ==
          2);
    const std::string err = slurp(ws.file("err.txt"));
    CHECK(err.find("absent.jsonl") != std::string::npos);

    CHECK(run(bin + " evaluate --model " + ws.file("nope.json") + " --data " +
              ws.file("absent.jsonl") + " 2> /dev/null") == 2);
    CHECK(run(bin + " bogus-subcommand 2> /dev/null") == 1);
    CHECK(run(bin + " 2> /dev/null") == 1);
  }

  SUBCASE("MIDRANK_SEED env var seeds generate") {
    const std::string cmd_env =
        "MIDRANK_SEED=42 " + bin + " generate --out-train " + train_path +
        " --out-test " + test_path +
        " --dim 4 --train-sequences 3 --test-sequences 3 --train-len 5"
        " --test-len 5 > /dev/null";
    REQUIRE(run(cmd_env) == 0);
    const std::string via_env = slurp(train_path);
    REQUIRE(run(bin + " generate --out-train " + train_path + " --out-test " +
                test_path +
                " --dim 4 --train-sequences 3 --test-sequences 3 --train-len 5"
                " --test-len 5 --seed 42 > /dev/null") == 0);
    CHECK(slurp(train_path) == via_env);
  }

  SUBCASE("config file values load and flags override them") {
    {
      std::ofstream cfg(ws.file("gen.toml"));
      cfg << "[generate]\ndim=4\ntrain-sequences=3\ntest-sequences=3\n"
             "train-len=5\ntest-len=5\nseed=9\n"
          << "out-train=" << train_path << "\nout-test=" << test_path << "\n";
    }
    REQUIRE(run(bin + " generate --config " + ws.file("gen.toml") +
                " > /dev/null") == 0);
    const std::string from_config = slurp(train_path);
    REQUIRE(run(bin + " generate --config " + ws.file("gen.toml") +
                " --seed 10 > /dev/null") == 0);
    CHECK(slurp(train_path) != from_config);  // flag overrode the file seed
  }
}

TEST_SUITE_END();
