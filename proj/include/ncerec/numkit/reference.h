#pragma once

// Straightforward single-threaded kernels. Tests compare the OpenMP
// kernels against these; bench/ measures the speedup.

#include "ncerec/numkit/dense_matrix.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::numkit::reference {

DenseMatrix sparse_dense_matmul(const SparseMatrix& s, const DenseMatrix& d);
DenseMatrix sparse_transpose_dense_matmul(const SparseMatrix& s, const DenseMatrix& d);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gram(const DenseMatrix& q);
DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace ncerec::numkit::reference
