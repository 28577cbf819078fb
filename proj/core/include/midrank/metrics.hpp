#ifndef MIDRANK_METRICS_HPP_
#define MIDRANK_METRICS_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "midrank/types.hpp"

namespace midrank {

/// Kendall-Tau: (concordant - discordant pairs) / (l(l-1)/2), in [-1, 1].
double kendall_tau(const Permutation& pred, const Permutation& truth);

/// Full-sequence NDCG with relevance grades induced by `truth`: the item at
/// ground-truth rank r (1-based) has relevance l - r, so the top item is most
/// relevant. In (0, 1], 1 iff pred sorts relevance non-increasingly.
double ndcg(const Permutation& pred, const Permutation& truth);

/// Percentage of correctly ordered pairs; identically 50 * (kendall_tau + 1).
double pair_accuracy(const Permutation& pred, const Permutation& truth);

/// Strict zero-one sequence loss weight: +1 iff pred == truth, else -1.
int delta_zero_one(const Permutation& pred, const Permutation& truth);

struct RankingReport {
  double ndcg = 0.0;
  double kendall_tau = 0.0;
  double pair_accuracy = 0.0;   // percentage in [0, 100]
  bool sequence_exact = false;
};

RankingReport evaluate_ranking(const Permutation& pred, const Permutation& truth);

/// Unweighted means over a set of per-sequence reports.
struct AggregateReport {
  std::string method;
  double ndcg = 0.0;
  double kendall_tau = 0.0;
  double pair_accuracy = 0.0;
  double exact_fraction = 0.0;
  std::size_t n_sequences = 0;
};

AggregateReport aggregate_reports(std::string method,
                                  std::span<const RankingReport> reports);

void write_reports_csv(std::ostream& os, std::span<const AggregateReport> rows);
std::string reports_to_json(std::span<const AggregateReport> rows);

}  // namespace midrank

#endif  // MIDRANK_METRICS_HPP_
