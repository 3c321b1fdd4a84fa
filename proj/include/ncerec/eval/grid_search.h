#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncerec/models/hyperparameters.h"
#include "ncerec/models/trained_model.h"

namespace ncerec::eval {

struct HyperparameterGrid {
  std::vector<std::size_t> ranks{50};
  std::vector<double> alphas{0.0};
  std::vector<double> betas{1.0};
  std::vector<double> lambdas{1.0};
  std::size_t power_iterations = 7;
  std::uint64_t seed = 0;

  // Full tuning ranges:
  //   rank   {50, 100, 200, 500}
  //   alpha  {-0.5, -0.4, -0.3, -0.2, -0.1, 0, 0.1, 1, 10, 100}
  //   beta   {0.7, 0.8, ..., 1.3}
  //   lambda {0.001, 0.01, 0.1, 1, 10, 100}
  static HyperparameterGrid full_ranges();
  // The full ranges restricted to the parameters `kind` actually uses;
  // unused ones collapse to their defaults (alpha 0, beta 1, lambda 1).
  static HyperparameterGrid ranges_for(models::ModelKind kind);

  // Cartesian product, rank outermost, then beta, alpha, lambda.
  std::vector<models::Hyperparameters> points() const;
};

struct GridPoint {
  models::Hyperparameters hyper;
  bool ok = false;
  double score = 0.0;
  std::string error;
  double train_seconds = 0.0;
};

struct GridSearchResult {
  std::string metric;
  models::Hyperparameters best;
  double best_score = 0.0;
  std::vector<GridPoint> points;
  // Best score reached at each beta, in grid order (NaN if every point at
  // that beta failed).
  std::vector<std::pair<double, double>> beta_sweep;
};

using TrainFn = std::function<models::TrainedModel(const models::Hyperparameters&)>;
using MetricFn = std::function<double(const models::TrainedModel&)>;

// Trains and scores every grid point. A point that throws is recorded as
// failed and the search continues. The best point maximizes the metric;
// ties go to the smaller rank, then the smaller lambda, then grid order.
// Throws std::runtime_error if every point failed.
GridSearchResult grid_search(const TrainFn& train, const HyperparameterGrid& grid,
                             const MetricFn& metric, std::string metric_name = "NDCG");

}  // namespace ncerec::eval
