#include "ncerec/cli/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "ncerec/dataio/model_io.h"
#include "ncerec/dataio/report.h"
#include "ncerec/errors.h"
#include "ncerec/eval/analysis.h"
#include "ncerec/eval/evaluate.h"
#include "ncerec/eval/grid_search.h"
#include "ncerec/models/trainers.h"
#include "ncerec/numkit/kernels.h"

namespace ncerec::cli {

using dataio::Json;
using models::Hyperparameters;
using models::ModelKind;
using models::TrainedModel;
using numkit::SparseMatrix;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const IncompatibleModelError*>(&e)) return kExitUnsupported;
  if (dynamic_cast<const UnsupportedError*>(&e)) return kExitUnsupported;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitIo;
  if (dynamic_cast<const FormatError*>(&e)) return kExitData;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitData;
  return kExitInternal;
}

eval::MetricConfig RunConfig::metric_config() const {
  eval::MetricConfig c;
  c.ks = ks;
  c.ndcg_depth = ndcg_depth;
  return c;
}

void RunConfig::validate() const {
  try {
    hyper.validate();
    metric_config().validate();
    format.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (train_on != "train" && train_on != "train+valid")
    throw ConfigError("train-on must be 'train' or 'train+valid', got '" + train_on + "'");
  if (!target.empty() && target != "valid" && target != "test")
    throw ConfigError("target must be 'valid' or 'test', got '" + target + "'");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw ConfigError("holdout fraction must be in (0, 1)");
  if (!std::isfinite(threshold)) throw ConfigError("threshold must be finite");
}

SparseMatrix training_matrix(const eval::EvalSplit& split, const std::string& train_on) {
  if (train_on == "train") return split.train;
  if (train_on == "train+valid") {
    const SparseMatrix* parts[] = {&split.train, &split.valid};
    return numkit::merge(parts);
  }
  throw ConfigError("unknown training part '" + train_on + "'");
}

const SparseMatrix& target_matrix(const eval::EvalSplit& split, const std::string& target) {
  if (target == "valid") return split.valid;
  if (target == "test") return split.test;
  throw ConfigError("unknown target part '" + target + "'");
}

std::string default_target(const std::string& train_on) {
  return train_on == "train" ? "valid" : "test";
}

Hyperparameters hyperparameters_for(const RunConfig& config, ModelKind kind) {
  Hyperparameters h = config.hyper;
  for (const std::string& path : config.param_files) {
    const Json doc = dataio::read_report(path);
    if (!doc.contains("model") || !doc.contains("hyperparameters"))
      throw FormatError(path + ": not a hyperparameter file");
    if (models::parse_model_kind(doc.at("model").get<std::string>()) != kind) continue;
    h = dataio::hyperparameters_from_json(doc.at("hyperparameters"), config.hyper);
  }
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return h;
}

std::vector<std::size_t> sample_users(std::size_t num_users, double fraction, std::uint64_t seed) {
  if (num_users == 0) return {};
  std::vector<std::size_t> order(num_users);
  for (std::size_t u = 0; u < num_users; ++u) order[u] = u;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(num_users))));
  order.resize(std::min(count, num_users));
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

void require(const std::string& value, const char* what) {
  if (value.empty()) throw ConfigError(std::string("missing required option: ") + what);
}

void apply_runtime(const RunConfig& config) { numkit::set_deterministic(config.deterministic); }

TrainedModel timed_train(ModelKind kind, const SparseMatrix& r, const Hyperparameters& h,
                         double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  TrainedModel model = models::train(kind, r, h);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

std::vector<ModelKind> model_list(const RunConfig& config, std::vector<ModelKind> fallback) {
  return config.models.empty() ? fallback : config.models;
}

eval::HyperparameterGrid load_grid(const RunConfig& config) {
  eval::HyperparameterGrid grid = eval::HyperparameterGrid::ranges_for(config.kind);
  grid.power_iterations = config.hyper.power_iterations;
  grid.seed = config.hyper.seed;
  if (config.grid_path.empty() || config.grid_path == "full") return grid;
  const Json doc = dataio::read_report(config.grid_path);
  try {
    if (doc.contains("ranks")) grid.ranks = doc.at("ranks").get<std::vector<std::size_t>>();
    if (doc.contains("betas")) grid.betas = doc.at("betas").get<std::vector<double>>();
    if (doc.contains("alphas")) grid.alphas = doc.at("alphas").get<std::vector<double>>();
    if (doc.contains("lambdas")) grid.lambdas = doc.at("lambdas").get<std::vector<double>>();
    if (doc.contains("powerIterations"))
      grid.power_iterations = doc.at("powerIterations").get<std::size_t>();
    if (doc.contains("seed")) grid.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw FormatError(config.grid_path + ": " + e.what());
  }
  if (grid.ranks.empty() || grid.betas.empty() || grid.alphas.empty() || grid.lambdas.empty())
    throw ConfigError(config.grid_path + ": every grid axis needs at least one value");
  return grid;
}

}  // namespace

void cmd_prepare(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.ratings_path, "--ratings");
  require(config.split_dir, "--split-dir");
  if (config.split_mode == eval::SplitMode::kChronological && config.format.timestamp_column < 0)
    throw FormatError("chronological split requires a timestamp column");

  const dataio::RatingsTable table = dataio::load_ratings(config.ratings_path, config.format);
  const dataio::BuiltMatrix built = dataio::build_matrix(table, config.threshold);
  dataio::SplitBundle bundle;
  bundle.maps = built.maps;
  bundle.threshold = config.threshold;
  bundle.seed = config.seed;
  if (config.split_mode == eval::SplitMode::kChronological) {
    try {
      bundle.split = eval::chronological_split(built.interactions, built.maps.users(),
                                               built.maps.items());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  } else {
    bundle.split = eval::random_split(built.interactions, built.maps.users(), built.maps.items(),
                                      config.seed);
  }
  dataio::save_split(bundle, config.split_dir);
  log << "prepared " << bundle.maps.users() << " users x " << bundle.maps.items()
      << " items: train " << bundle.split.train.nnz() << ", valid " << bundle.split.valid.nnz()
      << ", test " << bundle.split.test.nnz() << " (" << built.dropped_below_threshold
      << " ratings at or below " << config.threshold << " dropped)\n";
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.split_dir, "--split-dir");
  require(config.model_path, "--model");
  apply_runtime(config);
  const Hyperparameters h = hyperparameters_for(config, config.kind);
  const dataio::SplitBundle bundle = dataio::load_split(config.split_dir);
  const SparseMatrix r = training_matrix(bundle.split, config.train_on);
  double seconds = 0.0;
  TrainedModel model = timed_train(config.kind, r, h, seconds);
  model.item_ids = bundle.maps.item_ids();
  dataio::save_model(model, config.model_path);
  log << "train-seconds " << models::to_string(config.kind) << ' '
      << std::setprecision(6) << std::fixed << seconds << '\n';
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.split_dir, "--split-dir");
  require(config.model_path, "--model");
  require(config.output, "--output");
  apply_runtime(config);
  const dataio::SplitBundle bundle = dataio::load_split(config.split_dir);
  const TrainedModel model = dataio::load_model(config.model_path);
  if (model.num_items != bundle.maps.items() || model.num_users != bundle.maps.users())
    throw IncompatibleModelError("model shape " + std::to_string(model.num_users) + "x" +
                                 std::to_string(model.num_items) + " does not match the split");
  const SparseMatrix r = training_matrix(bundle.split, config.train_on);
  const std::string target = config.target.empty() ? default_target(config.train_on) : config.target;
  const SparseMatrix* exclude[] = {&r};
  eval::MetricsReport report = eval::evaluate_model(model, r, exclude,
                                                    target_matrix(bundle.split, target),
                                                    config.metric_config());
  report.split = target;
  dataio::write_report(dataio::to_json(report), config.output);

  if (!config.report_path.empty()) {
    const std::vector<std::size_t> counts = r.row_counts();
    std::vector<double> user_counts;
    for (std::size_t u : report.users) user_counts.push_back(static_cast<double>(counts[u]));
    dataio::write_report(dataio::to_json(eval::user_buckets(user_counts, report.metrics)),
                         config.report_path);
  }
  for (const auto& m : report.metrics)
    log << report.model << ' ' << m.name << ' ' << std::setprecision(6) << m.mean << " +- "
        << m.ci_half_width << '\n';
}

void cmd_gridsearch(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.split_dir, "--split-dir");
  require(config.output, "--output");
  apply_runtime(config);
  const eval::HyperparameterGrid grid = load_grid(config);
  const dataio::SplitBundle bundle = dataio::load_split(config.split_dir);
  const SparseMatrix& train = bundle.split.train;
  const eval::MetricConfig metrics = config.metric_config();
  const auto names = metrics.names();
  if (std::find(names.begin(), names.end(), config.metric) == names.end())
    throw ConfigError("metric " + config.metric + " is not in the configured metric set");

  models::CachingTrainer trainer(train);
  const SparseMatrix* exclude[] = {&train};
  const eval::GridSearchResult result = eval::grid_search(
      [&](const Hyperparameters& h) { return trainer(config.kind, h); }, grid,
      [&](const TrainedModel& m) {
        return eval::evaluate_model(m, train, exclude, bundle.split.valid, metrics)
            .metric(config.metric)
            .mean;
      },
      config.metric);

  Json best{{"model", std::string(models::to_string(config.kind))},
            {"metric", config.metric},
            {"score", result.best_score},
            {"hyperparameters", dataio::to_json(result.best)}};
  dataio::write_report(best, config.output);
  if (!config.report_path.empty()) {
    Json full = dataio::to_json(result);
    full["model"] = std::string(models::to_string(config.kind));
    dataio::write_report(full, config.report_path);
  }
  std::size_t failed = 0;
  for (const auto& p : result.points) failed += p.ok ? 0 : 1;
  log << "grid-search " << models::to_string(config.kind) << ": " << result.points.size()
      << " points, " << failed << " failed, best " << config.metric << ' '
      << std::setprecision(6) << result.best_score << " at " << models::describe(result.best)
      << '\n';
}

void cmd_coldstart(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.split_dir, "--split-dir");
  require(config.output, "--output");
  apply_runtime(config);
  const std::vector<ModelKind> kinds =
      model_list(config, {ModelKind::kNcePlrec, ModelKind::kPlrec});
  for (ModelKind kind : kinds) {
    if (!models::uses_regression(kind))
      throw UnsupportedError("cold-start unsupported for this model (" +
                             std::string(models::to_string(kind)) + ")");
  }

  const dataio::SplitBundle bundle = dataio::load_split(config.split_dir);
  std::vector<std::size_t> heldout;
  if (config.heldout_path.empty()) {
    heldout = sample_users(bundle.maps.users(), config.holdout_fraction, config.seed);
  } else {
    for (const std::string& id : dataio::load_ids(config.heldout_path)) {
      if (id.empty()) continue;
      const auto u = bundle.maps.find_user(id);
      if (!u) throw FormatError(config.heldout_path + ": unknown user id " + id);
      heldout.push_back(*u);
    }
    std::sort(heldout.begin(), heldout.end());
    heldout.erase(std::unique(heldout.begin(), heldout.end()), heldout.end());
  }
  if (heldout.empty()) throw ConfigError("no held-out users");

  // Models are fit on the retained users' train+valid rows. A held-out
  // user's train row is the input and their test row the target.
  const SparseMatrix& inputs = bundle.split.train;
  const SparseMatrix retained = training_matrix(bundle.split, "train+valid");
  std::vector<numkit::Triplet> kept;
  for (const auto& t : retained.to_triplets())
    if (!std::binary_search(heldout.begin(), heldout.end(), t.row)) kept.push_back(t);
  const SparseMatrix r = SparseMatrix::from_triplets(retained.rows(), retained.cols(), kept);

  Json reports = Json::array();
  std::vector<eval::MetricsReport> results;
  for (ModelKind kind : kinds) {
    const TrainedModel model = models::train(kind, r, hyperparameters_for(config, kind));
    eval::MetricsReport report = eval::evaluate_coldstart(model, inputs, bundle.split.test,
                                                          heldout, config.metric_config());
    report.split = "coldstart";
    reports.push_back(dataio::to_json(report));
    results.push_back(std::move(report));
  }
  Json doc{{"heldoutUsers", heldout}, {"reports", std::move(reports)}};
  dataio::write_report(doc, config.output);

  const std::string metric = "Recall@" + std::to_string(config.ks.back());
  if (results.size() >= 2) {
    const eval::PairedComparison cmp = eval::paired_difference(results[0], results[1], metric);
    if (!config.report_path.empty()) dataio::write_report(dataio::to_json(cmp), config.report_path);
    log << "coldstart " << cmp.model_a << " - " << cmp.model_b << ' ' << metric << " over "
        << cmp.users.size() << " users: mean difference " << std::setprecision(6)
        << cmp.mean_difference << '\n';
  } else {
    log << "coldstart " << results[0].model << ' ' << metric << ' ' << std::setprecision(6)
        << results[0].metric(metric).mean << '\n';
  }
}

void cmd_report_popularity(const RunConfig& config, std::ostream& log) {
  config.validate();
  require(config.split_dir, "--split-dir");
  require(config.output, "--output");
  apply_runtime(config);
  const std::vector<ModelKind> kinds = model_list(
      config, {ModelKind::kPop, ModelKind::kPureSvd, ModelKind::kPlrec, ModelKind::kNceSvd,
               ModelKind::kNcePlrec});
  const dataio::SplitBundle bundle = dataio::load_split(config.split_dir);
  const SparseMatrix r = training_matrix(bundle.split, config.train_on);
  const std::vector<std::size_t> counts = r.col_counts();
  const SparseMatrix* exclude[] = {&r};

  std::vector<std::pair<std::string, std::vector<std::size_t>>> top1;
  for (ModelKind kind : kinds) {
    const TrainedModel model = models::train(kind, r, hyperparameters_for(config, kind));
    std::vector<std::size_t> items;
    for (const auto& [user, item] : eval::top1_items(model, r, exclude)) items.push_back(item);
    top1.emplace_back(std::string(models::to_string(kind)), std::move(items));
  }
  const auto summaries = eval::top1_popularity_distribution(top1, counts);
  dataio::write_report(dataio::to_json(summaries), config.output);
  for (const auto& s : summaries)
    log << "top-1 popularity " << s.model << ": median " << std::setprecision(6) << s.median
        << " (q25 " << s.q25 << ", q75 " << s.q75 << ")\n";
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    const std::string& c = config.subcommand;
    if (c == "prepare") cmd_prepare(config, log);
    else if (c == "train") cmd_train(config, log);
    else if (c == "evaluate") cmd_evaluate(config, log);
    else if (c == "grid-search") cmd_gridsearch(config, log);
    else if (c == "coldstart") cmd_coldstart(config, log);
    else if (c == "report-popularity") cmd_report_popularity(config, log);
    else throw ConfigError("unknown subcommand '" + c + "'");
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace ncerec::cli
