#include "ncerec/eval/grid_search.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncerec::eval {

using models::Hyperparameters;
using models::ModelKind;

HyperparameterGrid HyperparameterGrid::full_ranges() {
  HyperparameterGrid g;
  g.ranks = {50, 100, 200, 500};
  g.alphas = {-0.5, -0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 1.0, 10.0, 100.0};
  g.betas = {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  g.lambdas = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0};
  return g;
}

HyperparameterGrid HyperparameterGrid::ranges_for(ModelKind kind) {
  const HyperparameterGrid full = full_ranges();
  HyperparameterGrid g;
  switch (kind) {
    case ModelKind::kNcePlrec:
      g.ranks = full.ranks;
      g.betas = full.betas;
      g.lambdas = full.lambdas;
      break;
    case ModelKind::kNcePlrecWeighted:
      g.ranks = full.ranks;
      g.betas = full.betas;
      g.alphas = full.alphas;
      g.lambdas = full.lambdas;
      break;
    case ModelKind::kPlrec:
      g.ranks = full.ranks;
      g.lambdas = full.lambdas;
      break;
    case ModelKind::kPureSvd:
      g.ranks = full.ranks;
      break;
    case ModelKind::kNceSvd:
      g.ranks = full.ranks;
      g.betas = full.betas;
      break;
    case ModelKind::kPop:
      break;
  }
  return g;
}

std::vector<Hyperparameters> HyperparameterGrid::points() const {
  std::vector<Hyperparameters> out;
  for (std::size_t rank : ranks)
    for (double beta : betas)
      for (double alpha : alphas)
        for (double lambda : lambdas) {
          Hyperparameters h;
          h.rank = rank;
          h.beta = beta;
          h.alpha = alpha;
          h.lambda = lambda;
          h.power_iterations = power_iterations;
          h.seed = seed;
          out.push_back(h);
        }
  return out;
}

GridSearchResult grid_search(const TrainFn& train, const HyperparameterGrid& grid,
                             const MetricFn& metric, std::string metric_name) {
  const std::vector<Hyperparameters> points = grid.points();
  if (points.empty()) throw std::invalid_argument("grid_search: empty grid");

  GridSearchResult result;
  result.metric = std::move(metric_name);
  const GridPoint* best = nullptr;
  for (const Hyperparameters& h : points) {
    GridPoint p;
    p.hyper = h;
    try {
      const auto start = std::chrono::steady_clock::now();
      models::TrainedModel model = train(h);
      p.train_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      p.score = metric(model);
      p.ok = std::isfinite(p.score);
      if (!p.ok) p.error = "metric is not finite";
    } catch (const std::exception& e) {
      p.ok = false;
      p.error = e.what();
    }
    result.points.push_back(std::move(p));
  }

  for (const GridPoint& p : result.points) {
    if (!p.ok) continue;
    if (best == nullptr || p.score > best->score ||
        (p.score == best->score &&
         (p.hyper.rank < best->hyper.rank ||
          (p.hyper.rank == best->hyper.rank && p.hyper.lambda < best->hyper.lambda)))) {
      best = &p;
    }
  }
  if (best == nullptr) throw std::runtime_error("grid_search: every grid point failed");
  result.best = best->hyper;
  result.best_score = best->score;

  for (double beta : grid.betas) {
    double top = std::numeric_limits<double>::quiet_NaN();
    for (const GridPoint& p : result.points) {
      if (!p.ok || p.hyper.beta != beta) continue;
      if (std::isnan(top) || p.score > top) top = p.score;
    }
    result.beta_sweep.emplace_back(beta, top);
  }
  return result;
}

}  // namespace ncerec::eval
