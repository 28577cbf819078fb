// midrank: generate synthetic ranking data, train subsequence-ranker
// ensembles, rank sequences, and evaluate ranking quality.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "midrank/data.hpp"
#include "midrank/fusion.hpp"
#include "midrank/metrics.hpp"
#include "midrank/model_io.hpp"
#include "midrank/rng.hpp"
#include "midrank/training.hpp"

namespace {

using json = nlohmann::json;
using namespace midrank;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<int>(threads, static_cast<int>(n));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(errc::io_error, "write failed for '" + path + "'");
}

std::vector<int> parse_lambdas(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw Error(errc::empty_lambda_range, "no lambdas in '" + csv + "'");
  return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string out_train = "train.jsonl";
  std::string out_test = "test.jsonl";
  std::size_t dim = 16;
  std::size_t train_sequences = 200;
  std::size_t test_sequences = 500;
  std::size_t train_len = 20;
  std::size_t test_len = 8;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

json generate_config_json(const GenerateArgs& a) {
  return {{"command", "generate"},     {"out_train", a.out_train},
          {"out_test", a.out_test},    {"dim", a.dim},
          {"train_sequences", a.train_sequences},
          {"test_sequences", a.test_sequences},
          {"train_len", a.train_len},  {"test_len", a.test_len},
          {"noise_sigma", a.noise_sigma}, {"seed", a.seed}};
}

int cmd_generate(const GenerateArgs& args) {
  SyntheticConfig train;
  train.dim = args.dim;
  train.num_sequences = args.train_sequences;
  train.seq_len = args.train_len;
  train.noise_sigma = args.noise_sigma;
  train.seed = derive_seed(args.seed, "synthetic-train");
  train.split = "train";

  // One latent direction for both splits, disjoint item streams.
  SyntheticConfig test = train;
  test.num_sequences = args.test_sequences;
  test.seq_len = args.test_len;
  test.seed = derive_seed(args.seed, "synthetic-test");
  test.split = "test";

  auto direction_rng = make_rng(derive_seed(args.seed, "latent-direction"));
  std::normal_distribution<double> gauss;
  FeatureVector w(args.dim);
  for (double& v : w) v = gauss(direction_rng);
  train.latent_direction = l2_normalize(w);
  test.latent_direction = train.latent_direction;

  save_dataset(args.out_train, generate_synthetic(train));
  save_dataset(args.out_test, generate_synthetic(test));

  json summary = generate_config_json(args);
  summary["wrote"] = {args.out_train, args.out_test};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string data;
  std::string model = "model.json";
  std::string report;
  std::string lambdas = "3,4,5,6,7,8";
  std::string feature_map = "stacked_diff";
  int positives = 8;
  double mu = 0.0;  // 0: cross-validate over the grid
  std::string mu_grid = "1e-4,1e-3,1e-2,1e-1,1";
  int cv_folds = 3;
  int epochs = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string fusion = "weighted_majority_vote";
};

json train_config_json(const TrainArgs& a) {
  return {{"command", "train"},   {"data", a.data},
          {"model", a.model},     {"report", a.report},
          {"lambdas", a.lambdas}, {"feature_map", a.feature_map},
          {"positives", a.positives}, {"mu", a.mu},
          {"mu_grid", a.mu_grid}, {"cv_folds", a.cv_folds},
          {"epochs", a.epochs},   {"tolerance", a.tolerance},
          {"seed", a.seed},       {"threads", a.threads},
          {"fusion", a.fusion}};
}

std::vector<double> parse_mu_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw Error(errc::config_error, "empty mu grid");
  return out;
}

struct LambdaFit {
  LengthRanker ranker;
  double mu = 0.0;
  double train_error = 0.0;
  int epochs = 0;
  double duality_gap = 0.0;
  bool converged = false;
  std::map<double, double> cv_val_errors;  // mu -> mean fold error
};

// Positive/negative psi samples for one lambda, with each sample tagged by
// the fold of its parent sequence.
struct LambdaSamples {
  std::vector<TrainingSample> samples;
  std::vector<int> folds;
};

LambdaSamples build_lambda_samples(std::span<const Sequence> seqs,
                                   const TrainConfig& config, int lambda,
                                   int cv_folds) {
  std::vector<Sequence> eligible;
  for (const Sequence& seq : seqs) {
    if (seq.length() >= static_cast<std::size_t>(lambda)) eligible.push_back(seq);
  }
  if (eligible.empty()) {
    throw Error(errc::sequence_too_short,
                "no training sequence fits lambda " + std::to_string(lambda));
  }
  const std::uint64_t lambda_seed =
      config.seed + static_cast<std::uint64_t>(lambda);
  auto positives =
      (lambda == 2 && config.ranksvm_all_pairs)
          ? sample_positive_pairs(eligible, config.positives_per_sequence, lambda_seed)
          : sample_positives(eligible, lambda, config.positives_per_sequence,
                             lambda_seed);
  auto negatives = generate_negatives(positives, lambda_seed);

  std::map<std::string, int> fold_of;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    fold_of[eligible[i].id] = static_cast<int>(i % static_cast<std::size_t>(
                                  std::max(cv_folds, 1)));
  }

  LambdaSamples out;
  auto add = [&](std::span<const Subsequence> subs) {
    auto mapped = make_training_samples(subs, config.feature_map);
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      out.samples.push_back(std::move(mapped[i]));
      out.folds.push_back(fold_of.at(subs[i].parent_id));
    }
  };
  add(positives);
  add(negatives);
  return out;
}

LambdaFit fit_lambda(std::span<const Sequence> seqs, const TrainConfig& base,
                     int lambda, const std::vector<double>& mu_grid,
                     int cv_folds, double fixed_mu) {
  LambdaFit fit;
  LambdaSamples data = build_lambda_samples(seqs, base, lambda, cv_folds);

  double chosen_mu = fixed_mu;
  if (fixed_mu <= 0.0) {
    // k-fold CV over the mu grid; ties prefer the stronger regularizer.
    const int folds = std::min<int>(
        cv_folds, static_cast<int>(
                      std::set<int>(data.folds.begin(), data.folds.end()).size()));
    if (folds < 2) {
      chosen_mu = mu_grid[mu_grid.size() / 2];
    } else {
      double best_err = std::numeric_limits<double>::infinity();
      for (double mu : mu_grid) {
        double err_sum = 0.0;
        for (int f = 0; f < folds; ++f) {
          std::vector<TrainingSample> fit_set, val_set;
          for (std::size_t i = 0; i < data.samples.size(); ++i) {
            (data.folds[i] == f ? val_set : fit_set).push_back(data.samples[i]);
          }
          SdcaOptions options;
          options.mu = mu;
          options.max_epochs = base.sdca_epochs;
          options.tolerance = base.tolerance;
          options.seed = derive_seed(
              base.seed + static_cast<std::uint64_t>(lambda), "cv-fold");
          SdcaResult r = sdca_minimize(fit_set, options);
          err_sum += zero_one_error(val_set, r.theta);
        }
        const double mean_err = err_sum / folds;
        fit.cv_val_errors[mu] = mean_err;
        if (mean_err <= best_err) {  // <=: later (larger) mu wins ties
          best_err = mean_err;
          chosen_mu = mu;
        }
      }
    }
  }

  TrainConfig final_config = base;
  final_config.mu = chosen_mu;
  TrainedRanker trained =
      train_length_ranker(data.samples, final_config, lambda);
  fit.ranker = std::move(trained.ranker);
  fit.mu = chosen_mu;
  fit.train_error = zero_one_error(data.samples, fit.ranker.theta);
  fit.epochs = trained.stats.epochs;
  fit.duality_gap = trained.stats.gap;
  fit.converged = trained.stats.converged;
  return fit;
}

// Mean single-ranker Kendall-Tau on held-out sequences, used to pick the
// best_single lambda.
std::map<int, double> held_out_kt(const std::vector<Sequence>& holdout,
                                  const Ensemble& ensemble, int threads,
                                  std::uint64_t seed) {
  std::vector<std::map<int, double>> per_seq(holdout.size());
  parallel_for(holdout.size(), threads, [&](std::size_t i) {
    const Sequence& seq = holdout[i];
    SearchConfig config;
    config.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    for (const LengthRanker& ranker : ensemble.rankers) {
      if (static_cast<std::size_t>(ranker.lambda) > seq.length()) continue;
      SearchConfig per = config;
      per.seed = derive_seed(config.seed, static_cast<std::uint64_t>(ranker.lambda));
      RankResult r = rank(seq.items, ranker, per,
                          ensemble.initializer ? &*ensemble.initializer : nullptr);
      per_seq[i][ranker.lambda] = kendall_tau(r.best, *seq.ground_truth);
    }
  });
  std::map<int, double> kt_sum;
  std::map<int, int> counts;
  for (const auto& m : per_seq) {
    for (const auto& [lambda, kt] : m) {
      kt_sum[lambda] += kt;
      counts[lambda] += 1;
    }
  }
  for (auto& [lambda, sum] : kt_sum) sum /= std::max(counts[lambda], 1);
  return kt_sum;
}

int cmd_train(const TrainArgs& args) {
  Dataset dataset = load_dataset(args.data);
  for (const Sequence& seq : dataset.sequences) {
    if (!seq.ground_truth) {
      throw Error(errc::missing_ground_truth,
                  "training sequence '" + seq.id + "' lacks an order");
    }
  }

  TrainConfig base;
  base.lambda_range = parse_lambdas(args.lambdas);
  base.positives_per_sequence = args.positives;
  base.sdca_epochs = args.epochs;
  base.tolerance = args.tolerance;
  base.seed = args.seed;
  base.feature_map = feature_map_from_string(args.feature_map);

  std::vector<double> mu_grid = parse_mu_grid(args.mu_grid);
  std::vector<int> lambdas = base.lambda_range;
  std::sort(lambdas.begin(), lambdas.end());
  if (std::adjacent_find(lambdas.begin(), lambdas.end()) != lambdas.end()) {
    throw Error(errc::invariant_violation, "duplicate lambda");
  }
  if (lambdas.front() < 2) {
    throw Error(errc::lambda_too_small, "lambdas must be >= 2");
  }

  // Fit every lambda in the range, plus the lambda=2 initializer.
  std::vector<int> all_lambdas = lambdas;
  if (all_lambdas.front() != 2) all_lambdas.insert(all_lambdas.begin(), 2);
  std::vector<LambdaFit> fits(all_lambdas.size());
  parallel_for(all_lambdas.size(), args.threads, [&](std::size_t i) {
    fits[i] = fit_lambda(dataset.sequences, base, all_lambdas[i], mu_grid,
                         args.cv_folds, args.mu);
  });

  Ensemble ensemble;
  ensemble.feature_map = base.feature_map;
  ensemble.dim = dataset.dim;
  for (std::size_t i = 0; i < all_lambdas.size(); ++i) {
    if (std::find(lambdas.begin(), lambdas.end(), all_lambdas[i]) != lambdas.end()) {
      ensemble.rankers.push_back(fits[i].ranker);
    }
  }
  ensemble.initializer = fits[0].ranker;  // all_lambdas[0] is always 2
  ensemble.fusion.kind = fusion_kind_from_string(args.fusion);

  // best_single selection: refit without the first fold's sequences, then
  // score each lambda on that held-out fold.
  int best_single_lambda = lambdas.front();
  std::map<int, double> holdout_kt;
  {
    std::vector<Sequence> holdout, rest;
    const int folds = std::max(args.cv_folds, 2);
    for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
      (static_cast<int>(i % static_cast<std::size_t>(folds)) == 0 ? holdout : rest)
          .push_back(dataset.sequences[i]);
    }
    if (!holdout.empty() && !rest.empty()) {
      Ensemble partial;
      partial.feature_map = base.feature_map;
      partial.dim = dataset.dim;
      std::vector<LambdaFit> partial_fits(all_lambdas.size());
      parallel_for(all_lambdas.size(), args.threads, [&](std::size_t i) {
        partial_fits[i] = fit_lambda(rest, base, all_lambdas[i], mu_grid,
                                     args.cv_folds, fits[i].mu);
      });
      for (std::size_t i = 0; i < all_lambdas.size(); ++i) {
        if (std::find(lambdas.begin(), lambdas.end(), all_lambdas[i]) !=
            lambdas.end()) {
          partial.rankers.push_back(partial_fits[i].ranker);
        }
      }
      partial.initializer = partial_fits[0].ranker;
      holdout_kt = held_out_kt(holdout, partial, args.threads,
                               derive_seed(args.seed, "best-single"));
      double best_kt = -2.0;
      for (const auto& [lambda, kt] : holdout_kt) {
        if (kt > best_kt) {
          best_kt = kt;
          best_single_lambda = lambda;
        }
      }
    }
  }
  ensemble.fusion.best_lambda = best_single_lambda;

  save_ensemble(args.model, ensemble);

  json report;
  report["config"] = train_config_json(args);
  report["dim"] = dataset.dim;
  report["n_sequences"] = dataset.sequences.size();
  report["best_single_lambda"] = best_single_lambda;
  report["holdout_kt"] = json::object();
  for (const auto& [lambda, kt] : holdout_kt) {
    report["holdout_kt"][std::to_string(lambda)] = kt;
  }
  report["per_lambda"] = json::array();
  for (std::size_t i = 0; i < all_lambdas.size(); ++i) {
    const LambdaFit& fit = fits[i];
    json entry{{"lambda", all_lambdas[i]},
               {"role", std::find(lambdas.begin(), lambdas.end(),
                                  all_lambdas[i]) != lambdas.end()
                            ? "ensemble"
                            : "initializer"},
               {"mu", fit.mu},
               {"train_zero_one_error", fit.train_error},
               {"sdca_epochs", fit.epochs},
               {"duality_gap", fit.duality_gap},
               {"converged", fit.converged}};
    json cv = json::object();
    for (const auto& [mu, err] : fit.cv_val_errors) {
      std::ostringstream key;
      key << mu;
      cv[key.str()] = err;
    }
    entry["cv_val_errors"] = cv;
    report["per_lambda"].push_back(entry);
  }

  const std::string report_path =
      args.report.empty() ? args.model + ".report.json" : args.report;
  write_text(report_path, report.dump(2) + "\n");
  std::cout << "wrote " << args.model << " and " << report_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// rank

struct RankArgs {
  std::string model;
  std::string data;  // empty: read JSONL sequences from stdin
  std::string out;   // empty: stdout
  std::string fusion;  // empty: model default
  bool all_fusions = false;
  int num_trees = 5;
  int max_depth = 0;
  std::string init = "ranksvm";
  std::uint64_t seed = 0;
  int threads = 1;
};

SearchInit parse_init(const std::string& name) {
  if (name == "ranksvm") return SearchInit::RankSvm;
  if (name == "identity") return SearchInit::Identity;
  if (name == "random") return SearchInit::Random;
  throw Error(errc::config_error, "unknown initializer '" + name + "'");
}

json trace_to_json(const SearchTrace& trace) {
  return {{"nodes_visited", trace.nodes_visited},
          {"depth_reached", trace.depth_reached},
          {"restarts_used", trace.restarts_used},
          {"best_score", trace.best_score}};
}

std::vector<Sequence> sequences_from_stdin(std::size_t dim) {
  std::vector<Sequence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty()) continue;
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw Error(errc::parse_error,
                  "stdin:" + std::to_string(line_no) + ": not JSON");
    }
    Sequence seq;
    seq.id = parsed.value("id", "stdin-" + std::to_string(line_no));
    for (const auto& item : parsed.at("items")) {
      seq.items.push_back(item.get<FeatureVector>());
    }
    if (parsed.contains("order") && !parsed["order"].is_null()) {
      seq.ground_truth =
          Permutation::from_order(parsed["order"].get<std::vector<int>>());
    }
    validate(seq);
    if (seq.dim() != dim) {
      throw Error(errc::dimension_mismatch,
                  "stdin sequence dim " + std::to_string(seq.dim()) +
                      " vs model dim " + std::to_string(dim));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

int cmd_rank(const RankArgs& args) {
  Ensemble ensemble = load_ensemble(args.model);
  if (!args.fusion.empty()) {
    ensemble.fusion.kind = fusion_kind_from_string(args.fusion);
    if (ensemble.fusion.kind == FusionKind::BestSingle &&
        ensemble.fusion.best_lambda == 0) {
      ensemble.fusion.best_lambda = ensemble.rankers.front().lambda;
    }
  }

  std::vector<Sequence> sequences;
  if (args.data.empty()) {
    sequences = sequences_from_stdin(ensemble.dim);
  } else {
    Dataset dataset = load_dataset(args.data);
    if (dataset.dim != ensemble.dim) {
      throw Error(errc::dimension_mismatch,
                  "dataset dim " + std::to_string(dataset.dim) +
                      " vs model dim " + std::to_string(ensemble.dim));
    }
    sequences = std::move(dataset.sequences);
  }

  SearchConfig search;
  search.num_trees = args.num_trees;
  search.max_depth = args.max_depth;
  search.initializer = parse_init(args.init);

  std::vector<std::string> lines(sequences.size());
  parallel_for(sequences.size(), args.threads, [&](std::size_t i) {
    const Sequence& seq = sequences[i];
    json entry{{"id", seq.id}};
    try {
      SearchConfig per = search;
      per.seed = derive_seed(derive_seed(args.seed, "rank"),
                             static_cast<std::uint64_t>(i));
      EnsembleRanking ranking = rank_with_ensemble(seq.items, ensemble, per);
      entry["permutation"] = ranking.fused.order();
      entry["fusion"] = to_string(ensemble.fusion.kind);
      json per_lambda = json::array();
      for (const RankerOutput& out : ranking.per_ranker) {
        per_lambda.push_back({{"lambda", out.lambda},
                              {"order", out.perm.order()},
                              {"score", out.score},
                              {"trace", trace_to_json(out.trace)}});
      }
      entry["per_lambda"] = per_lambda;
      if (args.all_fusions) {
        json alternatives;
        alternatives["weighted_majority_vote"] =
            fuse_weighted_majority(ranking.per_ranker, seq.length()).order();
        alternatives["winner_takes_all"] =
            fuse_winner_takes_all(ranking.per_ranker).order();
        entry["fusions"] = alternatives;
      }
    } catch (const Error& e) {
      entry["error"] = e.what();  // one bad sequence is data, not fatal
    }
    lines[i] = entry.dump();
  });

  std::ostringstream out;
  out << json{{"config",
               {{"command", "rank"},
                {"model", args.model},
                {"fusion", to_string(ensemble.fusion.kind)},
                {"num_trees", args.num_trees},
                {"init", args.init},
                {"seed", args.seed}}}}
             .dump()
      << "\n";
  for (const std::string& line : lines) out << line << "\n";

  if (args.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(args.out, out.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string model;
  std::string data;
  std::string out_csv;
  std::string out_json;
  std::string fusion;
  bool all_fusions = false;
  bool ablate_lambda = false;
  bool compare_exhaustive = false;
  int exhaustive_lambda = 0;  // 0: smallest lambda in the model
  int num_trees = 5;
  std::string init = "ranksvm";
  std::uint64_t seed = 0;
  int threads = 1;
};

int cmd_evaluate(const EvaluateArgs& args) {
  Ensemble ensemble = load_ensemble(args.model);
  if (!args.fusion.empty()) {
    ensemble.fusion.kind = fusion_kind_from_string(args.fusion);
    if (ensemble.fusion.kind == FusionKind::BestSingle &&
        ensemble.fusion.best_lambda == 0) {
      ensemble.fusion.best_lambda = ensemble.rankers.front().lambda;
    }
  }
  Dataset dataset = load_dataset(args.data);
  if (dataset.dim != ensemble.dim) {
    throw Error(errc::dimension_mismatch,
                "dataset dim " + std::to_string(dataset.dim) +
                    " vs model dim " + std::to_string(ensemble.dim));
  }
  std::vector<const Sequence*> usable;
  std::size_t skipped = 0;
  const int min_lambda = ensemble.rankers.front().lambda;
  for (const Sequence& seq : dataset.sequences) {
    if (!seq.ground_truth) {
      throw Error(errc::missing_ground_truth,
                  "evaluation sequence '" + seq.id + "' lacks an order");
    }
    if (seq.length() < static_cast<std::size_t>(min_lambda)) {
      ++skipped;
      continue;
    }
    usable.push_back(&seq);
  }
  if (usable.empty()) {
    throw Error(errc::insufficient_items, "no evaluable sequences");
  }

  SearchConfig search;
  search.num_trees = args.num_trees;
  search.initializer = parse_init(args.init);

  struct PerSequence {
    EnsembleRanking ranking;
    RankingReport fused;
    std::map<int, RankingReport> per_lambda;
    std::map<std::string, RankingReport> per_fusion;
  };
  std::vector<PerSequence> results(usable.size());

  parallel_for(usable.size(), args.threads, [&](std::size_t i) {
    const Sequence& seq = *usable[i];
    SearchConfig per = search;
    per.seed = derive_seed(derive_seed(args.seed, "evaluate"),
                           static_cast<std::uint64_t>(i));
    PerSequence& slot = results[i];
    slot.ranking = rank_with_ensemble(seq.items, ensemble, per);
    const Permutation& truth = *seq.ground_truth;
    slot.fused = evaluate_ranking(slot.ranking.fused, truth);
    if (args.ablate_lambda) {
      for (const RankerOutput& out : slot.ranking.per_ranker) {
        slot.per_lambda[out.lambda] = evaluate_ranking(out.perm, truth);
      }
    }
    if (args.all_fusions) {
      slot.per_fusion["weighted_majority_vote"] = evaluate_ranking(
          fuse_weighted_majority(slot.ranking.per_ranker, seq.length()), truth);
      slot.per_fusion["winner_takes_all"] = evaluate_ranking(
          fuse_winner_takes_all(slot.ranking.per_ranker), truth);
    }
  });

  std::vector<AggregateReport> rows;
  {
    std::vector<RankingReport> fused;
    fused.reserve(results.size());
    for (const auto& r : results) fused.push_back(r.fused);
    rows.push_back(aggregate_reports(
        "midrank_" + to_string(ensemble.fusion.kind), fused));
  }
  if (args.all_fusions) {
    for (const std::string name :
         {std::string("weighted_majority_vote"), std::string("winner_takes_all")}) {
      std::vector<RankingReport> reports;
      for (const auto& r : results) {
        auto it = r.per_fusion.find(name);
        if (it != r.per_fusion.end()) reports.push_back(it->second);
      }
      rows.push_back(aggregate_reports(name, reports));
    }
  }
  if (args.ablate_lambda) {
    for (const LengthRanker& ranker : ensemble.rankers) {
      std::vector<RankingReport> reports;
      for (const auto& r : results) {
        auto it = r.per_lambda.find(ranker.lambda);
        if (it != r.per_lambda.end()) reports.push_back(it->second);
      }
      if (!reports.empty()) {
        rows.push_back(aggregate_reports(
            "lambda=" + std::to_string(ranker.lambda), reports));
      }
    }
  }

  json timing;
  if (args.compare_exhaustive) {
    const int lambda = args.exhaustive_lambda > 0 ? args.exhaustive_lambda
                                                  : ensemble.rankers.front().lambda;
    const LengthRanker* ranker = nullptr;
    for (const auto& r : ensemble.rankers) {
      if (r.lambda == lambda) ranker = &r;
    }
    if (ranker == nullptr) {
      throw Error(errc::config_error,
                  "no ranker of lambda " + std::to_string(lambda));
    }
    using clock = std::chrono::steady_clock;
    double greedy_seconds = 0.0, exhaustive_seconds = 0.0;
    std::size_t agreements = 0, compared = 0;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const Sequence& seq = *usable[i];
      if (seq.length() > 9 ||
          seq.length() < static_cast<std::size_t>(lambda)) {
        continue;
      }
      SearchConfig per = search;
      per.seed = derive_seed(derive_seed(args.seed, "exhaustive"),
                             static_cast<std::uint64_t>(i));
      const auto t0 = clock::now();
      RankResult greedy = rank(seq.items, *ranker, per,
                               ensemble.initializer ? &*ensemble.initializer
                                                    : nullptr);
      const auto t1 = clock::now();
      auto [exact_perm, exact_score] = exhaustive_rank(seq.items, *ranker);
      const auto t2 = clock::now();
      greedy_seconds += std::chrono::duration<double>(t1 - t0).count();
      exhaustive_seconds += std::chrono::duration<double>(t2 - t1).count();
      ++compared;
      if (greedy.best_score == exact_score) ++agreements;
    }
    if (compared > 0) {
      timing = {{"lambda", lambda},
                {"sequences", compared},
                {"agreement_fraction",
                 static_cast<double>(agreements) / static_cast<double>(compared)},
                {"greedy_mean_seconds", greedy_seconds / compared},
                {"exhaustive_mean_seconds", exhaustive_seconds / compared},
                {"speedup", exhaustive_seconds / std::max(greedy_seconds, 1e-12)}};
    }
  }

  std::ostringstream csv;
  write_reports_csv(csv, rows);
  if (!args.out_csv.empty()) {
    write_text(args.out_csv, csv.str());
  }

  json out;
  out["config"] = {{"command", "evaluate"},
                   {"model", args.model},
                   {"data", args.data},
                   {"fusion", to_string(ensemble.fusion.kind)},
                   {"num_trees", args.num_trees},
                   {"init", args.init},
                   {"seed", args.seed},
                   {"skipped_too_short", skipped}};
  out["rows"] = json::parse(reports_to_json(rows));
  if (!timing.is_null()) out["exhaustive_comparison"] = timing;
  if (!args.out_json.empty()) {
    write_text(args.out_json, out.dump(2) + "\n");
  }
  std::cout << csv.str();
  if (!timing.is_null()) {
    std::cout << "exhaustive comparison: " << timing.dump() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MidRank: learning to rank with subsequence rankers"};
  app.set_config("--config", "", "TOML-style config file with [subcommand] sections");
  app.fallthrough();
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write synthetic train/test datasets");
  generate->add_option("--out-train", gen.out_train, "train JSONL path");
  generate->add_option("--out-test", gen.out_test, "test JSONL path");
  generate->add_option("--dim", gen.dim, "feature dimension");
  generate->add_option("--train-sequences", gen.train_sequences);
  generate->add_option("--test-sequences", gen.test_sequences);
  generate->add_option("--train-len", gen.train_len);
  generate->add_option("--test-len", gen.test_len);
  generate->add_option("--noise-sigma", gen.noise_sigma,
                       "ground-truth key noise std dev");
  generate->add_option("--seed", gen.seed)->envname("MIDRANK_SEED");

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "train a ranker ensemble");
  train->add_option("--data", tr.data, "training JSONL")->required();
  train->add_option("--model", tr.model, "output model path");
  train->add_option("--report", tr.report, "output training report path");
  train->add_option("--lambdas", tr.lambdas, "comma list, e.g. 3,4,5,6,7,8");
  train->add_option("--feature-map", tr.feature_map,
                    "mean_pairwise_diff|stacked|stacked_diff");
  train->add_option("--positives", tr.positives, "positives per sequence");
  train->add_option("--mu", tr.mu, "fixed regularizer; 0 cross-validates");
  train->add_option("--mu-grid", tr.mu_grid);
  train->add_option("--cv-folds", tr.cv_folds);
  train->add_option("--epochs", tr.epochs);
  train->add_option("--tolerance", tr.tolerance);
  train->add_option("--seed", tr.seed)->envname("MIDRANK_SEED");
  train->add_option("--threads", tr.threads);
  train->add_option("--fusion", tr.fusion);

  RankArgs rk;
  CLI::App* rank_cmd = app.add_subcommand("rank", "rank sequences with a model");
  rank_cmd->add_option("--model", rk.model)->required();
  rank_cmd->add_option("--data", rk.data, "JSONL dataset; stdin when omitted");
  rank_cmd->add_option("--out", rk.out, "output path; stdout when omitted");
  rank_cmd->add_option("--fusion", rk.fusion);
  rank_cmd->add_flag("--all-fusions", rk.all_fusions);
  rank_cmd->add_option("--num-trees", rk.num_trees);
  rank_cmd->add_option("--max-depth", rk.max_depth);
  rank_cmd->add_option("--init", rk.init, "ranksvm|identity|random");
  rank_cmd->add_option("--seed", rk.seed)->envname("MIDRANK_SEED");
  rank_cmd->add_option("--threads", rk.threads);

  EvaluateArgs ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "metrics on a test set");
  evaluate->add_option("--model", ev.model)->required();
  evaluate->add_option("--data", ev.data)->required();
  evaluate->add_option("--out-csv", ev.out_csv);
  evaluate->add_option("--out-json", ev.out_json);
  evaluate->add_option("--fusion", ev.fusion);
  evaluate->add_flag("--all-fusions", ev.all_fusions);
  evaluate->add_flag("--ablate-lambda", ev.ablate_lambda);
  evaluate->add_flag("--compare-exhaustive", ev.compare_exhaustive);
  evaluate->add_option("--exhaustive-lambda", ev.exhaustive_lambda);
  evaluate->add_option("--num-trees", ev.num_trees);
  evaluate->add_option("--init", ev.init);
  evaluate->add_option("--seed", ev.seed)->envname("MIDRANK_SEED");
  evaluate->add_option("--threads", ev.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (train->parsed()) return cmd_train(tr);
    if (rank_cmd->parsed()) return cmd_rank(rk);
    if (evaluate->parsed()) return cmd_evaluate(ev);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::config_error ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
