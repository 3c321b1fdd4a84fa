#include "ncerec/numkit/kernels.h"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ncerec/errors.h"

namespace ncerec::numkit {
namespace {

std::atomic<bool> g_deterministic{true};

using Index = std::ptrdiff_t;

void require(bool ok, const char* op, const std::string& detail) {
  if (!ok) throw ShapeError(std::string(op) + ": " + detail);
}

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

void set_deterministic(bool on) { g_deterministic.store(on); }
bool deterministic() { return g_deterministic.load(); }

DenseMatrix sparse_dense_matmul(const SparseMatrix& s, const DenseMatrix& d) {
  require(s.cols() == d.rows(), "sparse_dense_matmul",
          shape(s.rows(), s.cols()) + " times " + shape(d.rows(), d.cols()));
  const std::size_t k = d.cols();
  DenseMatrix out(s.rows(), k);
  const Index rows = static_cast<Index>(s.rows());
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < rows; ++i) {
    auto row = s.row(static_cast<std::size_t>(i));
    double* dst = out.row(static_cast<std::size_t>(i)).data();
    for (std::size_t p = 0; p < row.size(); ++p) {
      const double v = row.values[p];
      const double* src = d.row(row.cols[p]).data();
      for (std::size_t c = 0; c < k; ++c) dst[c] += v * src[c];
    }
  }
  return out;
}

DenseMatrix sparse_transpose_dense_matmul(const SparseMatrix& s, const DenseMatrix& d) {
  require(s.rows() == d.rows(), "sparse_transpose_dense_matmul",
          shape(s.cols(), s.rows()) + " times " + shape(d.rows(), d.cols()));
  const std::size_t k = d.cols();
  DenseMatrix out(s.cols(), k);
  const Index cols = static_cast<Index>(s.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (Index j = 0; j < cols; ++j) {
    auto col = s.col(static_cast<std::size_t>(j));
    double* dst = out.row(static_cast<std::size_t>(j)).data();
    for (std::size_t p = 0; p < col.size(); ++p) {
      const double v = col.values[p];
      const double* src = d.row(col.rows[p]).data();
      for (std::size_t c = 0; c < k; ++c) dst[c] += v * src[c];
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matmul",
          shape(a.rows(), a.cols()) + " times " + shape(b.rows(), b.cols()));
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  DenseMatrix out(a.rows(), n);
  const Index rows = static_cast<Index>(a.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    const double* arow = a.row(static_cast<std::size_t>(i)).data();
    double* dst = out.row(static_cast<std::size_t>(i)).data();
    for (std::size_t p = 0; p < inner; ++p) {
      const double v = arow[p];
      if (v == 0.0) continue;
      const double* brow = b.row(p).data();
      for (std::size_t c = 0; c < n; ++c) dst[c] += v * brow[c];
    }
  }
  return out;
}

DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(), "matmul_transposed",
          shape(a.rows(), a.cols()) + " times transpose of " + shape(b.rows(), b.cols()));
  const std::size_t inner = a.cols();
  DenseMatrix out(a.rows(), b.rows());
  const Index rows = static_cast<Index>(a.rows());
  const std::size_t n = b.rows();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    const double* arow = a.row(static_cast<std::size_t>(i)).data();
    double* dst = out.row(static_cast<std::size_t>(i)).data();
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b.row(j).data();
      double sum = 0.0;
      for (std::size_t p = 0; p < inner; ++p) sum += arow[p] * brow[p];
      dst[j] = sum;
    }
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& q) {
  const std::size_t m = q.rows();
  const std::size_t k = q.cols();
  DenseMatrix out(k, k);
  if (deterministic()) {
    // One thread owns each output entry and sums rows in ascending order.
    const DenseMatrix cols = q.transposed();
    const Index kk = static_cast<Index>(k);
#pragma omp parallel for schedule(dynamic, 1)
    for (Index a = 0; a < kk; ++a) {
      const double* ca = cols.row(static_cast<std::size_t>(a)).data();
      for (std::size_t b = static_cast<std::size_t>(a); b < k; ++b) {
        const double* cb = cols.row(b).data();
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += ca[i] * cb[i];
        out(static_cast<std::size_t>(a), b) = sum;
      }
    }
  } else {
    const Index mm = static_cast<Index>(m);
#pragma omp parallel
    {
      std::vector<double> local(k * k, 0.0);
#pragma omp for schedule(static) nowait
      for (Index i = 0; i < mm; ++i) {
        const double* r = q.row(static_cast<std::size_t>(i)).data();
        for (std::size_t a = 0; a < k; ++a) {
          const double ra = r[a];
          if (ra == 0.0) continue;
          for (std::size_t b = a; b < k; ++b) local[a * k + b] += ra * r[b];
        }
      }
#pragma omp critical(ncerec_gram_reduce)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) out(a, b) += local[a * k + b];
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < a; ++b) out(a, b) = out(b, a);
  return out;
}

void add_to_diagonal(DenseMatrix& a, double value) {
  require(a.rows() == a.cols(), "add_to_diagonal", "matrix is " + shape(a.rows(), a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += value;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  require(a.rows() == a.cols(), "cholesky", "matrix is " + shape(a.rows(), a.cols()));
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l.row(j).data();
    double d = a(j, j);
    for (std::size_t p = 0; p < j; ++p) d -= lj[p] * lj[p];
    if (!(d > 0.0) || !std::isfinite(d)) throw NotPositiveDefiniteError(j, d);
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = l.row(i).data();
      double s = a(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= li[p] * lj[p];
      l(i, j) = s / root;
    }
  }
  return l;
}

void cholesky_solve_in_place(const DenseMatrix& lower, double* b) {
  const std::size_t n = lower.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = lower.row(i).data();
    double s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= li[p] * b[p];
    b[i] = s / li[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t p = ii + 1; p < n; ++p) s -= lower(p, ii) * b[p];
    b[ii] = s / lower(ii, ii);
  }
}

DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == a.cols(), "spd_solve", "A is " + shape(a.rows(), a.cols()));
  require(a.rows() == b.rows(), "spd_solve",
          "A is " + shape(a.rows(), a.cols()) + ", B is " + shape(b.rows(), b.cols()));
  const DenseMatrix l = cholesky(a);
  // Right-hand sides are independent; work on B^T so each one is contiguous.
  DenseMatrix xt = b.transposed();
  const Index p = static_cast<Index>(b.cols());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < p; ++j) cholesky_solve_in_place(l, xt.row(static_cast<std::size_t>(j)).data());
  return xt.transposed();
}

}  // namespace ncerec::numkit
