#include "ncerec/eval/analysis.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncerec::eval {
namespace {

BucketStats stats_of(const std::vector<double>& values) {
  BucketStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

BucketReport user_buckets(std::span<const double> train_counts,
                          std::span<const MetricSummary> metrics) {
  for (const auto& m : metrics) {
    if (m.per_user.size() != train_counts.size())
      throw std::invalid_argument("user_buckets: metric " + m.name + " is not aligned with the counts");
  }
  BucketReport report;
  if (train_counts.empty()) return report;
  const std::vector<double> counts(train_counts.begin(), train_counts.end());
  const std::array<double, 4> levels{0.25, 0.5, 0.75, 1.0};
  for (std::size_t b = 0; b < 4; ++b) report.edges[b] = quantile(counts, levels[b]);

  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::size_t b = 0;
    while (b < 3 && counts[i] > report.edges[b]) ++b;
    report.members[b].push_back(i);
  }
  for (const auto& m : metrics) {
    std::array<BucketStats, 4> per_bucket;
    for (std::size_t b = 0; b < 4; ++b) {
      std::vector<double> values;
      values.reserve(report.members[b].size());
      for (std::size_t i : report.members[b]) values.push_back(m.per_user[i]);
      per_bucket[b] = stats_of(values);
    }
    report.metrics.emplace_back(m.name, per_bucket);
  }
  return report;
}

std::vector<PopularitySummary> top1_popularity_distribution(
    std::span<const std::pair<std::string, std::vector<std::size_t>>> top1_by_model,
    std::span<const std::size_t> item_counts) {
  std::vector<PopularitySummary> out;
  for (const auto& [name, items] : top1_by_model) {
    PopularitySummary s;
    s.model = name;
    for (std::size_t j : items) {
      if (j >= item_counts.size()) throw std::out_of_range("top1_popularity_distribution: item index");
      s.top1_popularity.push_back(static_cast<double>(item_counts[j]));
    }
    if (!s.top1_popularity.empty()) {
      s.min = quantile(s.top1_popularity, 0.0);
      s.q25 = quantile(s.top1_popularity, 0.25);
      s.median = quantile(s.top1_popularity, 0.5);
      s.q75 = quantile(s.top1_popularity, 0.75);
      s.max = quantile(s.top1_popularity, 1.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ncerec::eval
