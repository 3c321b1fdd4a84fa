#include "ncerec/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncerec::eval {

std::vector<std::string> MetricConfig::names() const {
  std::vector<std::string> out{"NDCG", "R-Precision"};
  for (std::size_t k : ks) out.push_back("Precision@" + std::to_string(k));
  for (std::size_t k : ks) out.push_back("Recall@" + std::to_string(k));
  return out;
}

std::size_t MetricConfig::list_length() const {
  std::size_t n = ndcg_depth;
  for (std::size_t k : ks) n = std::max(n, k);
  return n;
}

void MetricConfig::validate() const {
  if (ndcg_depth < 1) throw std::invalid_argument("NDCG depth must be >= 1");
  if (ks.empty()) throw std::invalid_argument("at least one metric cutoff is required");
  for (std::size_t k : ks)
    if (k < 1) throw std::invalid_argument("metric cutoffs must be >= 1");
}

std::vector<double> UserMetrics::flatten() const {
  std::vector<double> out{ndcg, r_precision};
  out.insert(out.end(), precision.begin(), precision.end());
  out.insert(out.end(), recall.begin(), recall.end());
  return out;
}

std::optional<UserMetrics> rank_metrics(std::span<const std::size_t> ranked,
                                        std::span<const std::size_t> relevant,
                                        const MetricConfig& config) {
  if (relevant.empty()) return std::nullopt;
  std::vector<std::size_t> rel(relevant.begin(), relevant.end());
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  const double num_relevant = static_cast<double>(rel.size());

  // hits_upto[r] = hits among the first r ranked items.
  std::vector<std::size_t> hits_upto(ranked.size() + 1, 0);
  double dcg = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const bool hit = std::binary_search(rel.begin(), rel.end(), ranked[r]);
    hits_upto[r + 1] = hits_upto[r] + (hit ? 1 : 0);
    if (hit && r < config.ndcg_depth) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  auto hits_at = [&](std::size_t k) { return hits_upto[std::min(k, ranked.size())]; };

  double idcg = 0.0;
  const std::size_t ideal = std::min(rel.size(), config.ndcg_depth);
  for (std::size_t r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);

  UserMetrics m;
  m.ndcg = dcg / idcg;
  m.r_precision = static_cast<double>(hits_at(rel.size())) / num_relevant;
  for (std::size_t k : config.ks) {
    const double h = static_cast<double>(hits_at(k));
    m.precision.push_back(h / static_cast<double>(k));
    m.recall.push_back(h / num_relevant);
  }
  return m;
}

MetricSummary aggregate(std::string name, std::vector<double> per_user) {
  if (per_user.empty()) throw std::invalid_argument("aggregate: no users for metric " + name);
  MetricSummary s;
  s.name = std::move(name);
  s.user_count = per_user.size();
  // Summing in sorted order makes the result independent of user order.
  std::vector<double> sorted = per_user;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double n = static_cast<double>(sorted.size());
  s.mean = sum / n;
  if (sorted.size() < 2) {
    s.degenerate_ci = true;
  } else {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    const double stddev = std::sqrt(ss / (n - 1.0));
    s.ci_half_width = 1.96 * stddev / std::sqrt(n);
  }
  s.per_user = std::move(per_user);
  return s;
}

const MetricSummary& MetricsReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m;
  throw std::out_of_range("no metric named " + name + " in report");
}

}  // namespace ncerec::eval
