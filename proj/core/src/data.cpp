#include "midrank/data.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>
#include <zlib.h>

#include "midrank/rng.hpp"

namespace midrank {

namespace {

using nlohmann::json;

bool has_gz_suffix(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string read_all(const std::string& path) {
  if (has_gz_suffix(path)) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) {
      throw Error(errc::io_error, "cannot open '" + path + "'");
    }
    std::string content;
    char chunk[1 << 15];
    int got;
    while ((got = gzread(gz, chunk, sizeof(chunk))) > 0) {
      content.append(chunk, static_cast<std::size_t>(got));
    }
    const bool failed = got < 0;
    gzclose(gz);
    if (failed) {
      throw Error(errc::io_error, "gzip read failed for '" + path + "'");
    }
    return content;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_all(const std::string& path, const std::string& content) {
  if (has_gz_suffix(path)) {
    gzFile gz = gzopen(path.c_str(), "wb9");
    if (gz == nullptr) {
      throw Error(errc::io_error, "cannot open '" + path + "' for writing");
    }
    const int wrote =
        gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
    gzclose(gz);
    if (wrote != static_cast<int>(content.size())) {
      throw Error(errc::io_error, "gzip write failed for '" + path + "'");
    }
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw Error(errc::io_error, "write failed for '" + path + "'");
  }
}

json parse_line(const std::string& line, const std::string& path,
                std::size_t line_no) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(errc::parse_error, path + ":" + std::to_string(line_no) +
                                       ": not a JSON object");
  }
  return parsed;
}

}  // namespace

void validate(const Dataset& dataset) {
  for (const Sequence& seq : dataset.sequences) {
    try {
      validate(seq);
    } catch (const Error& e) {
      throw Error(errc::invariant_violation,
                  "sequence '" + seq.id + "': " + e.what());
    }
    if (seq.dim() != dataset.dim) {
      throw Error(errc::invariant_violation,
                  "sequence '" + seq.id + "' has dim " +
                      std::to_string(seq.dim()) + ", dataset declares " +
                      std::to_string(dataset.dim));
    }
  }
}

Dataset load_dataset(const std::string& path) {
  const std::string content = read_all(path);
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;

  Dataset dataset;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    json parsed = parse_line(line, path, line_no);
    if (!header_seen) {
      if (!parsed.contains("dim") || !parsed["dim"].is_number_unsigned()) {
        throw Error(errc::parse_error,
                    path + ": header line must carry an unsigned 'dim'");
      }
      dataset.dim = parsed["dim"].get<std::size_t>();
      dataset.split = parsed.value("split", std::string("train"));
      header_seen = true;
      continue;
    }
    Sequence seq;
    try {
      seq.id = parsed.at("id").get<std::string>();
      for (const auto& item : parsed.at("items")) {
        seq.items.push_back(item.get<FeatureVector>());
      }
      if (parsed.contains("order") && !parsed["order"].is_null()) {
        seq.ground_truth =
            Permutation::from_order(parsed["order"].get<std::vector<int>>());
      }
    } catch (const Error&) {
      throw;  // permutation invariant failures keep their own code
    } catch (const json::exception& e) {
      throw Error(errc::parse_error,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    dataset.sequences.push_back(std::move(seq));
  }
  if (!header_seen) {
    throw Error(errc::parse_error, path + ": missing header line");
  }
  validate(dataset);
  return dataset;
}

void save_dataset(const std::string& path, const Dataset& dataset) {
  validate(dataset);
  std::ostringstream out;
  out << json({{"dim", dataset.dim}, {"split", dataset.split}}).dump() << '\n';
  for (const Sequence& seq : dataset.sequences) {
    json line{{"id", seq.id}, {"items", seq.items}};
    if (seq.ground_truth) {
      line["order"] = seq.ground_truth->order();
    }
    out << line.dump() << '\n';
  }
  write_all(path, out.str());
}

Dataset generate_synthetic(const SyntheticConfig& config) {
  if (config.seq_len < 2) {
    throw Error(errc::too_short, "seq_len must be >= 2");
  }
  if (config.dim < 1) {
    throw Error(errc::config_error, "dim must be >= 1");
  }
  if (config.noise_sigma < 0.0) {
    throw Error(errc::config_error, "noise_sigma must be >= 0");
  }

  auto direction_rng = make_rng(derive_seed(config.seed, "latent-direction"));
  std::normal_distribution<double> gauss(0.0, 1.0);

  FeatureVector w = config.latent_direction;
  if (w.empty()) {
    w.resize(config.dim);
    for (double& v : w) v = gauss(direction_rng);
    w = l2_normalize(w);
  } else {
    if (w.size() != config.dim) {
      throw Error(errc::dimension_mismatch,
                  "latent_direction dim " + std::to_string(w.size()) +
                      " vs config dim " + std::to_string(config.dim));
    }
    w = l2_normalize(w);
    double norm_sq = 0.0;
    for (double v : w) norm_sq += v * v;
    if (norm_sq == 0.0) {
      throw Error(errc::config_error, "latent_direction must be nonzero");
    }
  }

  auto item_rng = make_rng(derive_seed(config.seed, "items"));
  auto noise_rng = make_rng(derive_seed(config.seed, "key-noise"));

  Dataset dataset;
  dataset.dim = config.dim;
  dataset.split = config.split;
  dataset.sequences.reserve(config.num_sequences);

  for (std::size_t s = 0; s < config.num_sequences; ++s) {
    Sequence seq;
    seq.id = config.id_prefix + "-" + config.split + "-" + std::to_string(s);
    seq.items.reserve(config.seq_len);
    std::vector<double> keys(config.seq_len);
    for (std::size_t i = 0; i < config.seq_len; ++i) {
      FeatureVector x(config.dim);
      for (double& v : x) v = gauss(item_rng);
      x = l2_normalize(x);
      keys[i] = dot(w, x);
      if (config.noise_sigma > 0.0) {
        keys[i] += config.noise_sigma * gauss(noise_rng);
      }
      seq.items.push_back(std::move(x));
    }
    std::vector<int> order(config.seq_len);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&keys](int a, int b) {
      return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
    });
    seq.ground_truth = Permutation::from_order(std::move(order));
    dataset.sequences.push_back(std::move(seq));
  }
  return dataset;
}

std::vector<Sequence> sample_test_sequences(const Dataset& dataset,
                                            std::size_t length,
                                            std::size_t count,
                                            std::uint64_t seed) {
  if (length < 2) {
    throw Error(errc::too_short, "sampled sequences need length >= 2");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
    if (dataset.sequences[i].length() >= length &&
        dataset.sequences[i].ground_truth) {
      eligible.push_back(i);
    }
  }
  if (eligible.empty()) {
    throw Error(errc::insufficient_items,
                "no sequence in the '" + dataset.split +
                    "' split holds >= " + std::to_string(length) + " items");
  }

  auto rng = make_rng(derive_seed(seed, "test-sample"));
  std::vector<Sequence> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Sequence& source = dataset.sequences[eligible[static_cast<std::size_t>(
        uniform_below(rng, eligible.size()))]];
    // Pick `length` distinct ranks, then materialize them in a shuffled
    // presentation order; ground truth is the rank order restricted to them.
    std::vector<std::size_t> ranks(source.length());
    std::iota(ranks.begin(), ranks.end(), 0);
    for (std::size_t i = 0; i < length; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(uniform_below(rng, ranks.size() - i)) + i;
      std::swap(ranks[i], ranks[j]);
    }
    ranks.resize(length);
    std::sort(ranks.begin(), ranks.end());

    std::vector<int> presentation(length);
    std::iota(presentation.begin(), presentation.end(), 0);
    shuffle_in_place(presentation, rng);

    Sequence sampled;
    sampled.id = source.id + "#" + std::to_string(k);
    sampled.items.resize(length);
    const Permutation& truth = *source.ground_truth;
    // presentation[r] is the position (in `sampled.items`) of the item whose
    // ground-truth rank among the chosen ones is r.
    std::vector<int> order(length);
    for (std::size_t r = 0; r < length; ++r) {
      const int item_index = truth[ranks[r]];
      const auto pos = static_cast<std::size_t>(presentation[r]);
      sampled.items[pos] = source.items[static_cast<std::size_t>(item_index)];
      order[r] = presentation[r];
    }
    sampled.ground_truth = Permutation::from_order(std::move(order));
    out.push_back(std::move(sampled));
  }
  return out;
}

}  // namespace midrank
