#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ncerec/models/trained_model.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::models {

struct ScoredItem {
  std::size_t item;
  double score;
  bool operator==(const ScoredItem&) const = default;
};

struct RecommendationList {
  std::size_t user = 0;
  std::vector<ScoredItem> items;  // best first
  std::vector<std::size_t> item_indices() const;
};

// Scores of every item for training user `user`. Regression models project
// the user's row of `train` through the item embedding, so `train` must be
// the matrix the model was fit on. Throws std::out_of_range for an unknown
// user.
std::vector<double> score_user(const TrainedModel& model, const numkit::SparseMatrix& train,
                               std::size_t user);

// Scores for a user outside the training set: (r V) W^T. Only defined for
// models with an item embedding and regression weights; others throw
// UnsupportedError("cold-start unsupported for this model").
std::vector<double> coldstart_scores(const TrainedModel& model, const numkit::SparseRowView& row);

// Top-k items by score, skipping `exclude` (sorted ascending). Ties go to
// the more popular item, then to the lower index.
RecommendationList recommend_topk(std::span<const double> scores, std::size_t k,
                                  std::span<const std::size_t> exclude,
                                  std::span<const double> popularity);

}  // namespace ncerec::models
