#pragma once

// OpenMP kernels used by every training path. The serial versions in
// reference.h compute the same quantities and are kept for testing and
// benchmarking.
//
// Deterministic mode (the default) fixes the reduction order of every
// kernel, so results are bitwise identical for any thread count. Turning
// it off lets gram() use per-thread partial sums over rows, which is
// faster for tall inputs but rounds differently run to run.

#include <cstddef>

#include "ncerec/numkit/dense_matrix.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::numkit {

void set_deterministic(bool on);
bool deterministic();

// S * D.
DenseMatrix sparse_dense_matmul(const SparseMatrix& s, const DenseMatrix& d);
// S^T * D, using the column view of S.
DenseMatrix sparse_transpose_dense_matmul(const SparseMatrix& s, const DenseMatrix& d);
// A * B.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// A * B^T.
DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b);
// Q^T Q; the lower triangle is a mirror of the upper one.
DenseMatrix gram(const DenseMatrix& q);
// Adds `value` to the diagonal of a square matrix.
void add_to_diagonal(DenseMatrix& a, double value);

// Lower-triangular Cholesky factor L with A = L L^T. Throws
// NotPositiveDefiniteError on a pivot that is not strictly positive.
DenseMatrix cholesky(const DenseMatrix& a);
// Solves L L^T x = b in place for one right-hand side.
void cholesky_solve_in_place(const DenseMatrix& lower, double* b);
// X with A X = B for symmetric positive definite A.
DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace ncerec::numkit
