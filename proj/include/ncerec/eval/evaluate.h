#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ncerec/eval/metrics.h"
#include "ncerec/models/trained_model.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::eval {

// Ranks items for every user with a nonempty row in `target` and scores
// the lists against it. `train` is the matrix the model was fit on; items
// present in any of `exclude` for a user are never recommended to them.
MetricsReport evaluate_model(const models::TrainedModel& model, const numkit::SparseMatrix& train,
                             std::span<const numkit::SparseMatrix* const> exclude,
                             const numkit::SparseMatrix& target, const MetricConfig& config);

// First recommendation of every user that has at least one candidate item.
// Returns (user, item) pairs in user order.
std::vector<std::pair<std::size_t, std::size_t>> top1_items(
    const models::TrainedModel& model, const numkit::SparseMatrix& train,
    std::span<const numkit::SparseMatrix* const> exclude);

// Cold-start evaluation: each user in `users` (reported in ascending order) is scored from their row of
// `inputs` alone (coldstart_scores), with those input items excluded, and
// judged against their row of `targets`.
MetricsReport evaluate_coldstart(const models::TrainedModel& model,
                                 const numkit::SparseMatrix& inputs,
                                 const numkit::SparseMatrix& targets,
                                 std::span<const std::size_t> users, const MetricConfig& config);

// Sorted union of a user's items across several matrices.
std::vector<std::size_t> items_of(std::span<const numkit::SparseMatrix* const> matrices,
                                  std::size_t user);

}  // namespace ncerec::eval

namespace ncerec::eval {

// Per-user difference of one metric between two reports over the users
// both evaluated (a minus b).
struct PairedComparison {
  std::string metric;
  std::string model_a;
  std::string model_b;
  std::vector<std::size_t> users;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> difference;
  double mean_difference = 0.0;
};

// Throws std::invalid_argument if the reports share no user.
PairedComparison paired_difference(const MetricsReport& a, const MetricsReport& b,
                                   const std::string& metric);

}  // namespace ncerec::eval
