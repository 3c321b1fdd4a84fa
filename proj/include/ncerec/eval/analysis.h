#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncerec/eval/metrics.h"

namespace ncerec::eval {

// Linear-interpolation quantile (the common "type 7" definition); q in [0, 1].
double quantile(std::vector<double> values, double q);

struct BucketStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2 users
};

// Users split by the 25/50/75/100% quantiles of their training-interaction
// counts. Bucket b holds users with edges[b-1] < count <= edges[b].
struct BucketReport {
  std::array<double, 4> edges{};
  std::array<std::vector<std::size_t>, 4> members;  // positions into the input arrays
  std::vector<std::pair<std::string, std::array<BucketStats, 4>>> metrics;
};

// `train_counts[i]` belongs to the user behind `metrics[*].per_user[i]`.
BucketReport user_buckets(std::span<const double> train_counts,
                          std::span<const MetricSummary> metrics);

struct PopularitySummary {
  std::string model;
  std::vector<double> top1_popularity;  // one per user, in input order
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

// For each model, the training popularity of every user's first
// recommendation.
std::vector<PopularitySummary> top1_popularity_distribution(
    std::span<const std::pair<std::string, std::vector<std::size_t>>> top1_by_model,
    std::span<const std::size_t> item_counts);

}  // namespace ncerec::eval
