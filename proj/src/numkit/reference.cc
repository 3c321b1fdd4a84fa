#include "ncerec/numkit/reference.h"

#include "ncerec/errors.h"
#include "ncerec/numkit/kernels.h"

namespace ncerec::numkit::reference {

DenseMatrix sparse_dense_matmul(const SparseMatrix& s, const DenseMatrix& d) {
  if (s.cols() != d.rows()) throw ShapeError("reference::sparse_dense_matmul: shape mismatch");
  DenseMatrix out(s.rows(), d.cols());
  for (const Triplet& t : s.to_triplets())
    for (std::size_t c = 0; c < d.cols(); ++c) out(t.row, c) += t.value * d(t.col, c);
  return out;
}

DenseMatrix sparse_transpose_dense_matmul(const SparseMatrix& s, const DenseMatrix& d) {
  if (s.rows() != d.rows())
    throw ShapeError("reference::sparse_transpose_dense_matmul: shape mismatch");
  DenseMatrix out(s.cols(), d.cols());
  for (const Triplet& t : s.to_triplets())
    for (std::size_t c = 0; c < d.cols(); ++c) out(t.col, c) += t.value * d(t.row, c);
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("reference::matmul: shape mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) sum += a(i, p) * b(p, j);
      out(i, j) = sum;
    }
  return out;
}

DenseMatrix gram(const DenseMatrix& q) {
  DenseMatrix out(q.cols(), q.cols());
  for (std::size_t a = 0; a < q.cols(); ++a)
    for (std::size_t b = a; b < q.cols(); ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) sum += q(i, a) * q(i, b);
      out(a, b) = sum;
      out(b, a) = sum;
    }
  return out;
}

DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw ShapeError("reference::spd_solve: shape mismatch");
  const DenseMatrix l = cholesky(a);
  DenseMatrix x(b.rows(), b.cols());
  std::vector<double> col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    cholesky_solve_in_place(l, col.data());
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

}  // namespace ncerec::numkit::reference
