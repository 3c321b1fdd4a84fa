#include "ncerec/eval/evaluate.h"

#include <algorithm>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>

#include "ncerec/errors.h"
#include "ncerec/models/scoring.h"

namespace ncerec::eval {
namespace {


MetricsReport summarize(const models::TrainedModel& model, const MetricConfig& config,
                        std::vector<std::size_t> users,
                        std::vector<std::optional<UserMetrics>> per_user) {
  MetricsReport report;
  report.model = std::string(models::to_string(model.kind));
  const std::vector<std::string> names = config.names();
  std::vector<std::vector<double>> columns(names.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!per_user[i]) continue;
    report.users.push_back(users[i]);
    const std::vector<double> flat = per_user[i]->flatten();
    for (std::size_t c = 0; c < names.size(); ++c) columns[c].push_back(flat[c]);
  }
  if (report.users.empty()) throw std::invalid_argument("evaluation: no user has relevant items");
  for (std::size_t c = 0; c < names.size(); ++c)
    report.metrics.push_back(aggregate(names[c], std::move(columns[c])));
  return report;
}

// Runs `body(i)` for i in [0, count) in parallel and rethrows the first
// exception after the loop.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ncerec_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::size_t> row_items(const numkit::SparseMatrix& m, std::size_t user) {
  if (user >= m.rows()) return {};
  const auto row = m.row(user);
  return {row.cols.begin(), row.cols.end()};
}

}  // namespace

std::vector<std::size_t> items_of(std::span<const numkit::SparseMatrix* const> matrices,
                                  std::size_t user) {
  std::vector<std::size_t> out;
  for (const numkit::SparseMatrix* m : matrices) {
    const std::vector<std::size_t> items = row_items(*m, user);
    out.insert(out.end(), items.begin(), items.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MetricsReport evaluate_model(const models::TrainedModel& model, const numkit::SparseMatrix& train,
                             std::span<const numkit::SparseMatrix* const> exclude,
                             const numkit::SparseMatrix& target, const MetricConfig& config) {
  config.validate();
  if (target.cols() != model.num_items)
    throw std::invalid_argument("evaluate_model: target has " + std::to_string(target.cols()) +
                                " items, model has " + std::to_string(model.num_items));
  std::vector<std::size_t> users;
  for (std::size_t u = 0; u < target.rows(); ++u)
    if (target.row_nnz(u) > 0) users.push_back(u);

  std::vector<std::optional<UserMetrics>> per_user(users.size());
  parallel_for(users.size(), [&](std::size_t i) {
    const std::size_t u = users[i];
    const std::vector<std::size_t> relevant = row_items(target, u);
    const std::vector<std::size_t> excluded = items_of(exclude, u);
    const std::vector<double> scores = models::score_user(model, train, u);
    const std::size_t length = std::max(config.list_length(), relevant.size());
    const auto list = models::recommend_topk(scores, length, excluded, model.popularity);
    per_user[i] = rank_metrics(list.item_indices(), relevant, config);
  });
  return summarize(model, config, std::move(users), std::move(per_user));
}

std::vector<std::pair<std::size_t, std::size_t>> top1_items(
    const models::TrainedModel& model, const numkit::SparseMatrix& train,
    std::span<const numkit::SparseMatrix* const> exclude) {
  const std::size_t users = model.num_users;
  std::vector<std::optional<std::size_t>> first(users);
  parallel_for(users, [&](std::size_t u) {
    const std::vector<std::size_t> excluded = items_of(exclude, u);
    if (excluded.size() >= model.num_items) return;
    const std::vector<double> scores = models::score_user(model, train, u);
    const auto list = models::recommend_topk(scores, 1, excluded, model.popularity);
    if (!list.items.empty()) first[u] = list.items.front().item;
  });
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < users; ++u)
    if (first[u]) out.emplace_back(u, *first[u]);
  return out;
}

MetricsReport evaluate_coldstart(const models::TrainedModel& model,
                                 const numkit::SparseMatrix& inputs,
                                 const numkit::SparseMatrix& targets,
                                 std::span<const std::size_t> users, const MetricConfig& config) {
  config.validate();
  if (inputs.cols() != model.num_items || targets.cols() != model.num_items)
    throw std::invalid_argument("evaluate_coldstart: item count does not match the model");
  if (!model.weights || !model.item_embedding)
    throw UnsupportedError("cold-start unsupported for this model (" +
                           std::string(models::to_string(model.kind)) + ")");
  std::vector<std::size_t> ordered(users.begin(), users.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  for (std::size_t u : ordered)
    if (u >= inputs.rows() || u >= targets.rows())
      throw std::out_of_range("evaluate_coldstart: user " + std::to_string(u));

  std::vector<std::optional<UserMetrics>> per_user(ordered.size());
  parallel_for(ordered.size(), [&](std::size_t i) {
    const std::size_t u = ordered[i];
    const std::vector<std::size_t> relevant = row_items(targets, u);
    if (relevant.empty()) return;
    const auto row = inputs.row(u);
    const std::vector<std::size_t> excluded(row.cols.begin(), row.cols.end());
    const std::vector<double> scores = models::coldstart_scores(model, row);
    const std::size_t length = std::max(config.list_length(), relevant.size());
    const auto list = models::recommend_topk(scores, length, excluded, model.popularity);
    per_user[i] = rank_metrics(list.item_indices(), relevant, config);
  });
  return summarize(model, config, std::move(ordered), std::move(per_user));
}

}  // namespace ncerec::eval

namespace ncerec::eval {

PairedComparison paired_difference(const MetricsReport& a, const MetricsReport& b,
                                   const std::string& metric) {
  const MetricSummary& ma = a.metric(metric);
  const MetricSummary& mb = b.metric(metric);
  PairedComparison out;
  out.metric = metric;
  out.model_a = a.model;
  out.model_b = b.model;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.users.size(); ++i) {
    while (j < b.users.size() && b.users[j] < a.users[i]) ++j;
    if (j == b.users.size()) break;
    if (b.users[j] != a.users[i]) continue;
    out.users.push_back(a.users[i]);
    out.a.push_back(ma.per_user[i]);
    out.b.push_back(mb.per_user[j]);
    out.difference.push_back(ma.per_user[i] - mb.per_user[j]);
  }
  if (out.users.empty()) throw std::invalid_argument("paired_difference: no common users");
  std::vector<double> sorted = out.difference;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double d : sorted) sum += d;
  out.mean_difference = sum / static_cast<double>(sorted.size());
  return out;
}

}  // namespace ncerec::eval
