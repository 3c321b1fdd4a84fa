#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ncerec::eval {

struct MetricConfig {
  std::vector<std::size_t> ks{5, 10, 20, 50};
  std::size_t ndcg_depth = 50;

  // Metric names in report order: NDCG, R-Precision, Precision@K..., Recall@K...
  std::vector<std::string> names() const;
  // Shortest ranked list that covers every cutoff.
  std::size_t list_length() const;
  void validate() const;
};

struct UserMetrics {
  double ndcg = 0.0;
  double r_precision = 0.0;
  std::vector<double> precision;  // aligned with MetricConfig::ks
  std::vector<double> recall;

  // Values in MetricConfig::names() order.
  std::vector<double> flatten() const;
};

// Binary-relevance metrics of one ranked list:
//   Precision@K = hits in top K / K
//   Recall@K    = hits in top K / |relevant|
//   R-Precision = hits in top |relevant| / |relevant|
//   NDCG        = DCG / IDCG, gain 1 / log2(rank + 1), cut at ndcg_depth
// Returns nullopt when `relevant` is empty: such users are skipped, not
// scored as zero.
std::optional<UserMetrics> rank_metrics(std::span<const std::size_t> ranked,
                                        std::span<const std::size_t> relevant,
                                        const MetricConfig& config);

struct MetricSummary {
  std::string name;
  double mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sample stddev / sqrt(n)
  std::size_t user_count = 0;
  bool degenerate_ci = false;  // single user; half width reported as 0
  std::vector<double> per_user;
};

// Throws std::invalid_argument on an empty input.
MetricSummary aggregate(std::string name, std::vector<double> per_user);

struct MetricsReport {
  std::string model;
  std::string split;
  std::vector<std::size_t> users;  // evaluated users, aligned with per_user
  std::vector<MetricSummary> metrics;

  // Throws std::out_of_range for an unknown metric name.
  const MetricSummary& metric(const std::string& name) const;
};

}  // namespace ncerec::eval
