#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncerec/dataio/matrix_io.h"
#include "ncerec/dataio/ratings.h"
#include "ncerec/eval/metrics.h"
#include "ncerec/eval/split.h"
#include "ncerec/models/hyperparameters.h"
#include "ncerec/models/trained_model.h"

namespace ncerec::cli {

// Exit codes of the nceplrec tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,     // unexpected failure
  kExitUsage = 2,        // bad command line (reported by the parser)
  kExitData = 3,         // unreadable or inconsistent input data, incl. missing timestamps
  kExitConfig = 4,       // invalid hyperparameters or configuration
  kExitUnsupported = 5,  // operation not defined for the model, or incompatible model file
  kExitIo = 6,           // a file could not be opened or written
};

// Invalid configuration detected before any work starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int exit_code_for(const std::exception& e);

struct RunConfig {
  std::string subcommand;

  // prepare
  std::string ratings_path;
  dataio::FormatDescriptor format = dataio::FormatDescriptor::movielens_100k();
  double threshold = 3.0;  // keep ratings strictly above
  eval::SplitMode split_mode = eval::SplitMode::kChronological;

  std::string split_dir;  // written by prepare, read by everything else
  std::string model_path;
  std::string output;     // main output file; "-" is stdout
  std::string report_path;  // secondary output (grid report, comparison, buckets)

  models::ModelKind kind = models::ModelKind::kNcePlrec;
  std::vector<models::ModelKind> models;  // coldstart / report-popularity
  models::Hyperparameters hyper;
  std::vector<std::string> param_files;  // best-hyperparameter files from grid-search

  // Which split parts the model is fit on: "train" or "train+valid". The
  // evaluated part is "valid" for the former, "test" for the latter unless
  // overridden by `target`.
  std::string train_on = "train+valid";
  std::string target;

  std::vector<std::size_t> ks{5, 10, 20, 50};
  std::size_t ndcg_depth = 50;
  std::uint64_t seed = 0;  // split shuffling and held-out user sampling
  bool deterministic = true;

  std::string grid_path;  // JSON grid; empty means the full ranges for the kind
  std::string metric = "NDCG";

  std::string heldout_path;  // one user id per line; empty means sample
  double holdout_fraction = 0.05;

  eval::MetricConfig metric_config() const;
  // Throws ConfigError.
  void validate() const;
};

// Each command writes its outputs and a short human summary to `log`.
// Errors are thrown; `run` turns them into exit codes.
void cmd_prepare(const RunConfig& config, std::ostream& log);
// Prints "train-seconds <kind> <seconds>" on `log`.
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);
void cmd_gridsearch(const RunConfig& config, std::ostream& log);
void cmd_coldstart(const RunConfig& config, std::ostream& log);
void cmd_report_popularity(const RunConfig& config, std::ostream& log);

// Dispatches on config.subcommand and maps exceptions to exit codes,
// printing the message to `err`.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

// Shared helpers, exposed for tests.
numkit::SparseMatrix training_matrix(const eval::EvalSplit& split, const std::string& train_on);
const numkit::SparseMatrix& target_matrix(const eval::EvalSplit& split, const std::string& target);
std::string default_target(const std::string& train_on);
// Hyperparameters for `kind`: the last param file naming it, else config.hyper.
models::Hyperparameters hyperparameters_for(const RunConfig& config, models::ModelKind kind);
// `fraction` of the users (at least one), drawn with mt19937_64(seed), ascending.
std::vector<std::size_t> sample_users(std::size_t num_users, double fraction, std::uint64_t seed);

}  // namespace ncerec::cli
