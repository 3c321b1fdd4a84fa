#pragma once

// Dense building blocks behind randomized_truncated_svd. Internal header.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ncerec/numkit/dense_matrix.h"

namespace ncerec::embedding::detail {

// `count` vectors of length `length`, stored one after another.
class ColumnBlock {
 public:
  ColumnBlock() = default;
  ColumnBlock(std::size_t length, std::size_t count)
      : length_(length), count_(count), data_(length * count, 0.0) {}

  // Columns of a row-major matrix.
  static ColumnBlock from_dense(const numkit::DenseMatrix& m);
  numkit::DenseMatrix to_dense() const;

  std::size_t length() const { return length_; }
  std::size_t count() const { return count_; }
  std::span<double> col(std::size_t j) { return {data_.data() + j * length_, length_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * length_, length_}; }

 private:
  std::size_t length_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
};

// Orthonormalizes the columns in place with classical Gram-Schmidt and
// reorthogonalization. A column that is numerically dependent on the ones
// before it is replaced by a random vector from `rng`, orthonormalized the
// same way, so the result always has orthonormal columns. Requires
// count <= length. Returns the upper-triangular R with input = Q R (the
// diagonal entry of a replaced column is 0).
numkit::DenseMatrix orthonormalize(ColumnBlock& block, std::mt19937_64& rng);

struct SmallSvd {
  ColumnBlock left;            // orthonormal, one column per singular value
  std::vector<double> sigma;   // nonincreasing
  numkit::DenseMatrix right;   // square, orthogonal; right(:, j) pairs with sigma[j]
};

// One-sided Jacobi SVD of a square matrix given by its columns:
// X = left * diag(sigma) * right^T. Disjoint column pairs are rotated in
// parallel in a fixed round-robin order, so the result does not depend on
// the thread count.
SmallSvd jacobi_svd(ColumnBlock x, std::mt19937_64& rng);

}  // namespace ncerec::embedding::detail
