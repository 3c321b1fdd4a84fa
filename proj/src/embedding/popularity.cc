#include "ncerec/embedding/popularity.h"

#include <stdexcept>

namespace ncerec::embedding {

PopularityProfile item_popularity(const numkit::SparseMatrix& r) {
  if (r.nnz() == 0) throw std::invalid_argument("item_popularity: no interactions");
  PopularityProfile profile;
  profile.item_counts = r.col_counts();
  profile.total = r.nnz();
  profile.probabilities.resize(r.cols());
  const double total = static_cast<double>(profile.total);
  for (std::size_t j = 0; j < r.cols(); ++j)
    profile.probabilities[j] = static_cast<double>(profile.item_counts[j]) / total;
  return profile;
}

}  // namespace ncerec::embedding
