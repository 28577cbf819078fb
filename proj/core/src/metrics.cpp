#include "midrank/metrics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace midrank {

namespace {

void check_lengths(const Permutation& pred, const Permutation& truth) {
  if (pred.size() != truth.size()) {
    throw Error(errc::length_mismatch,
                "pred length " + std::to_string(pred.size()) +
                    " vs truth length " + std::to_string(truth.size()));
  }
}

// concordant - discordant over all item pairs; total orders, so no ties.
long long concordance_balance(const Permutation& pred,
                              const Permutation& truth) {
  const std::vector<int> pr = pred.ranks();
  const std::vector<int> tr = truth.ranks();
  const std::size_t n = pr.size();
  long long balance = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool same = (pr[a] < pr[b]) == (tr[a] < tr[b]);
      balance += same ? 1 : -1;
    }
  }
  return balance;
}

}  // namespace

double kendall_tau(const Permutation& pred, const Permutation& truth) {
  check_lengths(pred, truth);
  const double n = static_cast<double>(pred.size());
  return static_cast<double>(concordance_balance(pred, truth)) /
         (0.5 * n * (n - 1.0));
}

double pair_accuracy(const Permutation& pred, const Permutation& truth) {
  // Kept as the algebraic identity so the two metrics can never drift apart.
  return 50.0 * (kendall_tau(pred, truth) + 1.0);
}

double ndcg(const Permutation& pred, const Permutation& truth) {
  check_lengths(pred, truth);
  const std::size_t n = pred.size();
  const std::vector<int> truth_rank = truth.ranks();
  auto gain = [&](int item) {
    const double rel =
        static_cast<double>(n) - 1.0 -
        static_cast<double>(truth_rank[static_cast<std::size_t>(item)]);
    return std::pow(2.0, rel) - 1.0;
  };
  double dcg = 0.0;
  double ideal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double discount = 1.0 / std::log2(static_cast<double>(i) + 2.0);
    dcg += gain(pred[i]) * discount;
    ideal += gain(truth[i]) * discount;
  }
  return dcg / ideal;
}

int delta_zero_one(const Permutation& pred, const Permutation& truth) {
  check_lengths(pred, truth);
  return pred == truth ? +1 : -1;
}

RankingReport evaluate_ranking(const Permutation& pred,
                               const Permutation& truth) {
  RankingReport r;
  r.kendall_tau = kendall_tau(pred, truth);
  r.pair_accuracy = 50.0 * (r.kendall_tau + 1.0);
  r.ndcg = ndcg(pred, truth);
  r.sequence_exact = (pred == truth);
  return r;
}

AggregateReport aggregate_reports(std::string method,
                                  std::span<const RankingReport> reports) {
  AggregateReport agg;
  agg.method = std::move(method);
  agg.n_sequences = reports.size();
  if (reports.empty()) return agg;
  for (const auto& r : reports) {
    agg.ndcg += r.ndcg;
    agg.kendall_tau += r.kendall_tau;
    agg.pair_accuracy += r.pair_accuracy;
    agg.exact_fraction += r.sequence_exact ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(reports.size());
  agg.ndcg /= n;
  agg.kendall_tau /= n;
  agg.pair_accuracy /= n;
  agg.exact_fraction /= n;
  return agg;
}

namespace {

std::string fixed6(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

void write_reports_csv(std::ostream& os,
                       std::span<const AggregateReport> rows) {
  os << "method,ndcg,kt,pair_acc,n_sequences\n";
  for (const auto& row : rows) {
    os << row.method << ',' << fixed6(row.ndcg) << ','
       << fixed6(row.kendall_tau) << ',' << fixed6(row.pair_accuracy) << ','
       << row.n_sequences << '\n';
  }
}

std::string reports_to_json(std::span<const AggregateReport> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    arr.push_back({{"method", row.method},
                   {"ndcg", row.ndcg},
                   {"kt", row.kendall_tau},
                   {"pair_acc", row.pair_accuracy},
                   {"exact_fraction", row.exact_fraction},
                   {"n_sequences", row.n_sequences}});
  }
  return arr.dump(2);
}

}  // namespace midrank
