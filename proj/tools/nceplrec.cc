// nceplrec: prepare splits, train, evaluate, grid-search, cold-start and
// popularity reports. Options may also come from a TOML/INI file given with
// --config; command-line values win over file values, which win over defaults.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncerec/cli/commands.h"
#include "ncerec/eval/split.h"
#include "ncerec/models/hyperparameters.h"

namespace {

struct RawOptions {
  std::string format = "movielens-100k";
  std::string delimiter;
  int user_column = -2;
  int item_column = -2;
  int rating_column = -2;
  int timestamp_column = -2;
  std::size_t columns = 0;
  std::string split_mode = "chronological";
  std::string kind = "NCE-PLRec";
  std::vector<std::string> models;
};

}  // namespace

int main(int argc, char** argv) {
  using ncerec::cli::RunConfig;
  RunConfig config;
  RawOptions raw;
  bool header = false;

  CLI::App app{"NCE-PLRec one-class collaborative filtering"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1, 1);

  app.add_option("--ratings", config.ratings_path, "Ratings file");
  app.add_option("--format", raw.format, "Ratings preset: movielens-100k, movielens-csv")
      ->check(CLI::IsMember({"movielens-100k", "movielens-csv"}));
  app.add_option("--delimiter", raw.delimiter, "Field delimiter (\\t, tab, comma, ...)");
  app.add_option("--user-col", raw.user_column, "0-based user column");
  app.add_option("--item-col", raw.item_column, "0-based item column");
  app.add_option("--rating-col", raw.rating_column, "0-based rating column");
  app.add_option("--timestamp-col", raw.timestamp_column, "0-based timestamp column, -1 if none");
  app.add_option("--columns", raw.columns, "Exact number of fields per row");
  auto* header_flag = app.add_flag("--header,!--no-header", header, "First line is a header");
  app.add_option("--threshold", config.threshold, "Keep ratings strictly above this value")
      ->capture_default_str();
  app.add_option("--split-mode", raw.split_mode, "chronological or random")
      ->check(CLI::IsMember({"chronological", "random"}))
      ->capture_default_str();

  app.add_option("--split-dir", config.split_dir, "Directory of a prepared split");
  app.add_option("--model", config.model_path, "Model file");
  app.add_option("--output,-o", config.output, "Main output file, - for stdout");
  app.add_option("--report", config.report_path,
                 "Secondary report (grid points, buckets, cold-start differences)");

  app.add_option("--kind", raw.kind,
                 "Model: NCE-PLRec, NCE-PLRec-W, PLRec, PureSVD, NCE-SVD, POP")
      ->capture_default_str();
  app.add_option("--models", raw.models, "Models for coldstart / report-popularity");
  app.add_option("--rank,-k", config.hyper.rank)->capture_default_str();
  app.add_option("--beta", config.hyper.beta)->capture_default_str();
  app.add_option("--alpha", config.hyper.alpha)->capture_default_str();
  app.add_option("--lambda", config.hyper.lambda)->capture_default_str();
  app.add_option("--power-iterations", config.hyper.power_iterations)->capture_default_str();
  app.add_option("--svd-seed", config.hyper.seed, "Seed of the randomized SVD")
      ->capture_default_str();
  app.add_option("--params", config.param_files, "Best-hyperparameter files from grid-search");
  app.add_option("--train-on", config.train_on, "train or train+valid")
      ->check(CLI::IsMember({"train", "train+valid"}))
      ->capture_default_str();
  app.add_option("--target", config.target, "valid or test (default follows --train-on)")
      ->check(CLI::IsMember({"valid", "test"}));

  app.add_option("--ks", config.ks, "Cutoffs for Precision@K and Recall@K")
      ->capture_default_str();
  app.add_option("--ndcg-depth", config.ndcg_depth)->capture_default_str();
  app.add_option("--seed", config.seed, "Split shuffling and held-out sampling seed")
      ->capture_default_str();
  app.add_flag("--deterministic,!--no-deterministic", config.deterministic,
               "Fixed reduction order in parallel kernels")
      ->capture_default_str();
  app.add_option("--grid", config.grid_path, "Grid JSON file; empty or 'full' for full ranges");
  app.add_option("--metric", config.metric, "Grid-search metric")->capture_default_str();
  app.add_option("--heldout", config.heldout_path, "Held-out user ids, one per line");
  app.add_option("--holdout-fraction", config.holdout_fraction)->capture_default_str();

  for (const char* name :
       {"prepare", "train", "evaluate", "grid-search", "coldstart", "report-popularity"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("prepare")->description("Binarize, split 50/20/30 and write the split");
  app.get_subcommand("train")->description("Train one model and print its training time");
  app.get_subcommand("evaluate")->description("Rank metrics with 95% confidence intervals");
  app.get_subcommand("grid-search")->description("Tune on the validation part");
  app.get_subcommand("coldstart")->description("Score held-out users from their interactions");
  app.get_subcommand("report-popularity")
      ->description("Training popularity of every user's first recommendation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ncerec::cli::kExitUsage;
  }

  try {
    config.subcommand = app.get_subcommands().front()->get_name();
    config.format = raw.format == "movielens-csv"
                        ? ncerec::dataio::FormatDescriptor::movielens_csv()
                        : ncerec::dataio::FormatDescriptor::movielens_100k();
    if (!raw.delimiter.empty()) config.format.delimiter = ncerec::dataio::unescape_delimiter(raw.delimiter);
    if (raw.user_column != -2) config.format.user_column = raw.user_column;
    if (raw.item_column != -2) config.format.item_column = raw.item_column;
    if (raw.rating_column != -2) config.format.rating_column = raw.rating_column;
    if (raw.timestamp_column != -2) config.format.timestamp_column = raw.timestamp_column;
    if (raw.columns != 0) config.format.columns = raw.columns;
    if (header_flag->count() > 0) config.format.header = header;
    config.split_mode = ncerec::eval::parse_split_mode(raw.split_mode);
    config.kind = ncerec::models::parse_model_kind(raw.kind);
    for (const auto& m : raw.models) config.models.push_back(ncerec::models::parse_model_kind(m));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ncerec::cli::kExitConfig;
  }
  return ncerec::cli::run(config, std::cout, std::cerr);
}
