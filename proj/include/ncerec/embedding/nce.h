#pragma once

#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::embedding {

double sigmoid(double x);

// Depopularized matrix D*. Every observed (i, j) of `r` maps to
//   max(log(total) - beta * log(count_j), 0)
// with natural logs; entries clamped to zero are dropped from the pattern.
// Requires beta > 0 and a nonempty `r`.
numkit::SparseMatrix nce_transform(const numkit::SparseMatrix& r, double beta);

// Derivative of the per-entry contrastive objective with respect to the
// dot product d: sigmoid(-d) - p * sigmoid(d). It vanishes at
// d = log(1 / p), the value nce_transform assigns when beta = 1.
double nce_gradient(double d, double popularity_prob);

}  // namespace ncerec::embedding
