#pragma once

#include <cstddef>
#include <vector>

#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::embedding {

// Observed-interaction count per item and the induced noise distribution
// p(j) = count_j / total.
struct PopularityProfile {
  std::vector<std::size_t> item_counts;
  std::size_t total = 0;
  std::vector<double> probabilities;
};

// Throws std::invalid_argument("no interactions") when `r` is empty.
PopularityProfile item_popularity(const numkit::SparseMatrix& r);

}  // namespace ncerec::embedding
