#include "ncerec/embedding/nce.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ncerec/embedding/popularity.h"

namespace ncerec::embedding {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

numkit::SparseMatrix nce_transform(const numkit::SparseMatrix& r, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("nce_transform: beta must be > 0");
  const PopularityProfile pop = item_popularity(r);
  const double log_total = std::log(static_cast<double>(pop.total));

  std::vector<double> item_value(r.cols(), 0.0);
  for (std::size_t j = 0; j < r.cols(); ++j) {
    if (pop.item_counts[j] == 0) continue;
    const double v = log_total - beta * std::log(static_cast<double>(pop.item_counts[j]));
    item_value[j] = v > 0.0 ? v : 0.0;
  }

  std::vector<numkit::Triplet> entries;
  entries.reserve(r.nnz());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    auto row = r.row(i);
    for (std::size_t c : row.cols) {
      if (item_value[c] > 0.0) entries.push_back({i, c, item_value[c]});
    }
  }
  return numkit::SparseMatrix::from_triplets(r.rows(), r.cols(), std::move(entries));
}

double nce_gradient(double d, double popularity_prob) {
  return sigmoid(-d) - popularity_prob * sigmoid(d);
}

}  // namespace ncerec::embedding
