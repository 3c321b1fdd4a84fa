#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ncerec/numkit/dense_matrix.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::embedding {

struct SvdOptions {
  std::size_t rank = 50;
  std::size_t power_iterations = 7;
  std::size_t oversampling = 10;
  std::uint64_t seed = 0;
};

// S ~= U diag(singular_values) V^T with U (m x k), V (n x k).
struct TruncatedFactorization {
  numkit::DenseMatrix u;
  std::vector<double> singular_values;  // nonincreasing, >= 0
  numkit::DenseMatrix v;
  std::size_t rank = 0;
  std::size_t power_iterations = 0;
  std::uint64_t seed = 0;
};

// Scaled factors U* = U sqrt(Sigma), V* = V sqrt(Sigma).
struct EmbeddingPair {
  numkit::DenseMatrix user_embedding;
  numkit::DenseMatrix item_embedding;
};

// Randomized range finder with subspace (power) iterations followed by an
// exact SVD of the projected block. Each singular pair is oriented so that
// the largest-magnitude entry of its V column is positive. Identical
// inputs and seed give a bitwise-identical result.
//
// Throws std::invalid_argument unless 1 <= rank <= min(m, n).
TruncatedFactorization randomized_truncated_svd(const numkit::SparseMatrix& s,
                                                const SvdOptions& options);

EmbeddingPair scale_embeddings(const TruncatedFactorization& f);

}  // namespace ncerec::embedding
