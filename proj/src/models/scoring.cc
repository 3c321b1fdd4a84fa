#include "ncerec/models/scoring.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ncerec/errors.h"

namespace ncerec::models {

std::vector<std::size_t> RecommendationList::item_indices() const {
  std::vector<std::size_t> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.item);
  return out;
}

std::vector<double> coldstart_scores(const TrainedModel& model, const numkit::SparseRowView& row) {
  if (!model.weights || !model.item_embedding) {
    throw UnsupportedError("cold-start unsupported for this model (" +
                           std::string(to_string(model.kind)) + ")");
  }
  const numkit::DenseMatrix& v = *model.item_embedding;
  const numkit::DenseMatrix& w = *model.weights;
  const std::size_t k = v.cols();
  std::vector<double> q(k, 0.0);
  for (std::size_t p = 0; p < row.size(); ++p) {
    if (row.cols[p] >= v.rows()) throw std::out_of_range("coldstart_scores: item index out of range");
    const double r = row.values[p];
    const double* vj = v.row(row.cols[p]).data();
    for (std::size_t c = 0; c < k; ++c) q[c] += r * vj[c];
  }
  std::vector<double> scores(w.rows());
  for (std::size_t j = 0; j < w.rows(); ++j) {
    const double* wj = w.row(j).data();
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += q[c] * wj[c];
    scores[j] = s;
  }
  return scores;
}

std::vector<double> score_user(const TrainedModel& model, const numkit::SparseMatrix& train,
                               std::size_t user) {
  if (user >= model.num_users) {
    throw std::out_of_range("score_user: unknown user " + std::to_string(user));
  }
  switch (model.kind) {
    case ModelKind::kPop:
      return model.popularity;
    case ModelKind::kPureSvd:
    case ModelKind::kNceSvd: {
      const auto& u = *model.user_factor;
      const auto& v = *model.item_embedding;
      std::vector<double> scores(v.rows());
      const double* ui = u.row(user).data();
      for (std::size_t j = 0; j < v.rows(); ++j) {
        const double* vj = v.row(j).data();
        double s = 0.0;
        for (std::size_t c = 0; c < v.cols(); ++c) s += ui[c] * vj[c];
        scores[j] = s;
      }
      return scores;
    }
    default:
      break;
  }
  if (train.rows() != model.num_users || train.cols() != model.num_items) {
    throw ShapeError("score_user: training matrix does not match the model");
  }
  return coldstart_scores(model, train.row(user));
}

RecommendationList recommend_topk(std::span<const double> scores, std::size_t k,
                                  std::span<const std::size_t> exclude,
                                  std::span<const double> popularity) {
  if (k < 1) throw std::invalid_argument("recommend_topk: K must be >= 1");
  if (!popularity.empty() && popularity.size() != scores.size()) {
    throw ShapeError("recommend_topk: popularity length differs from scores");
  }
  std::vector<std::size_t> candidates;
  candidates.reserve(scores.size());
  std::size_t e = 0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    while (e < exclude.size() && exclude[e] < j) ++e;
    if (e < exclude.size() && exclude[e] == j) continue;
    candidates.push_back(j);
  }
  auto pop = [&](std::size_t j) { return popularity.empty() ? 0.0 : popularity[j]; };
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (pop(a) != pop(b)) return pop(a) > pop(b);
    return a < b;
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);
  RecommendationList list;
  list.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) list.items.push_back({candidates[i], scores[candidates[i]]});
  return list;
}

}  // namespace ncerec::models
