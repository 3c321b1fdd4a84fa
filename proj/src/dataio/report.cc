#include "ncerec/dataio/report.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "ncerec/errors.h"

namespace ncerec::dataio {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

}  // namespace

Json to_json(const models::Hyperparameters& h) {
  return Json{{"rank", h.rank},
              {"beta", h.beta},
              {"alpha", h.alpha},
              {"lambda", h.lambda},
              {"powerIterations", h.power_iterations},
              {"seed", h.seed}};
}

models::Hyperparameters hyperparameters_from_json(const Json& j, models::Hyperparameters base) {
  try {
    if (!j.is_object()) throw FormatError("hyperparameters: expected an object");
    if (j.contains("rank")) base.rank = j.at("rank").get<std::size_t>();
    if (j.contains("beta")) base.beta = j.at("beta").get<double>();
    if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
    if (j.contains("lambda")) base.lambda = j.at("lambda").get<double>();
    if (j.contains("powerIterations"))
      base.power_iterations = j.at("powerIterations").get<std::size_t>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("hyperparameters: ") + e.what());
  }
  return base;
}

Json to_json(const eval::MetricsReport& report, bool per_user) {
  Json out;
  out["model"] = report.model;
  out["split"] = report.split;
  out["userCount"] = report.users.size();
  if (per_user) out["users"] = report.users;
  Json metrics = Json::array();
  for (const auto& m : report.metrics) {
    Json entry{{"name", m.name},
               {"mean", number(m.mean)},
               {"ciHalfWidth", number(m.ci_half_width)},
               {"userCount", m.user_count},
               {"degenerateCi", m.degenerate_ci}};
    if (per_user) entry["perUser"] = numbers(m.per_user);
    metrics.push_back(std::move(entry));
  }
  out["metrics"] = std::move(metrics);
  return out;
}

Json to_json(const eval::BucketReport& report) {
  Json out;
  out["edges"] = numbers({report.edges.begin(), report.edges.end()});
  Json sizes = Json::array();
  for (const auto& m : report.members) sizes.push_back(m.size());
  out["bucketSizes"] = std::move(sizes);
  Json metrics = Json::array();
  for (const auto& [name, buckets] : report.metrics) {
    Json rows = Json::array();
    for (const auto& b : buckets)
      rows.push_back({{"count", b.count}, {"mean", number(b.mean)}, {"stddev", number(b.stddev)}});
    metrics.push_back({{"name", name}, {"buckets", std::move(rows)}});
  }
  out["metrics"] = std::move(metrics);
  return out;
}

Json to_json(const std::vector<eval::PopularitySummary>& summaries) {
  Json models = Json::array();
  for (const auto& s : summaries) {
    models.push_back({{"model", s.model},
                      {"min", number(s.min)},
                      {"q25", number(s.q25)},
                      {"median", number(s.median)},
                      {"q75", number(s.q75)},
                      {"max", number(s.max)},
                      {"top1Popularity", numbers(s.top1_popularity)}});
  }
  return Json{{"models", std::move(models)}};
}

Json to_json(const eval::GridSearchResult& result) {
  Json points = Json::array();
  for (const auto& p : result.points) {
    Json entry{{"hyperparameters", to_json(p.hyper)}, {"ok", p.ok}};
    if (p.ok) {
      entry["score"] = number(p.score);
    } else {
      entry["error"] = p.error;
    }
    points.push_back(std::move(entry));
  }
  Json sweep = Json::array();
  for (const auto& [beta, score] : result.beta_sweep)
    sweep.push_back({{"beta", beta}, {"bestScore", number(score)}});
  return Json{{"metric", result.metric},
              {"best", to_json(result.best)},
              {"bestScore", number(result.best_score)},
              {"points", std::move(points)},
              {"betaSweep", std::move(sweep)}};
}

Json to_json(const eval::PairedComparison& c) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.users.size(); ++i)
    rows.push_back({{"user", c.users[i]},
                    {"a", number(c.a[i])},
                    {"b", number(c.b[i])},
                    {"difference", number(c.difference[i])}});
  return Json{{"metric", c.metric},
              {"modelA", c.model_a},
              {"modelB", c.model_b},
              {"meanDifference", number(c.mean_difference)},
              {"rows", std::move(rows)}};
}

std::string serialize(const Json& document) { return document.dump(2) + "\n"; }

void write_report(const Json& document, const std::string& path) {
  const std::string text = serialize(document);
  if (path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path);
}

Json read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace ncerec::dataio
