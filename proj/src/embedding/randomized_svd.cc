#include "ncerec/embedding/randomized_svd.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "embedding/jacobi_svd.h"
#include "ncerec/numkit/kernels.h"

namespace ncerec::embedding {
namespace {

using detail::ColumnBlock;
using numkit::DenseMatrix;

// Stream tag for the generator that refills degenerate directions; keeps it
// independent of the test-matrix draw.
constexpr std::uint64_t kCompletionStream = 0x9e3779b97f4a7c15ULL;

DenseMatrix leading_columns(const DenseMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), k);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto src = m.row(i);
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(k), out.row(i).begin());
  }
  return out;
}

DenseMatrix orthonormal_basis(const DenseMatrix& m, std::mt19937_64& rng) {
  ColumnBlock block = ColumnBlock::from_dense(m);
  detail::orthonormalize(block, rng);
  return block.to_dense();
}

}  // namespace

TruncatedFactorization randomized_truncated_svd(const numkit::SparseMatrix& s,
                                                const SvdOptions& options) {
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  const std::size_t k = options.rank;
  if (k < 1 || k > std::min(m, n)) {
    throw std::invalid_argument("randomized_truncated_svd: rank " + std::to_string(k) +
                                " outside [1, " + std::to_string(std::min(m, n)) + "]");
  }
  const std::size_t width = std::min(k + options.oversampling, std::min(m, n));

  std::mt19937_64 sample_rng(options.seed);
  std::mt19937_64 completion_rng(options.seed ^ kCompletionStream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DenseMatrix omega(n, width);
  for (double& v : omega.values()) v = gauss(sample_rng);

  // Range finder: Y spans (S S^T)^q S Omega.
  DenseMatrix y = orthonormal_basis(numkit::sparse_dense_matmul(s, omega), completion_rng);
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    DenseMatrix z = orthonormal_basis(numkit::sparse_transpose_dense_matmul(s, y), completion_rng);
    y = orthonormal_basis(numkit::sparse_dense_matmul(s, z), completion_rng);
  }

  // B = Y^T S; factor B^T = Q2 R2, then R2 = L diag(sigma) W^T, so
  // S ~= (Y W) diag(sigma) (Q2 L)^T.
  ColumnBlock bt = ColumnBlock::from_dense(numkit::sparse_transpose_dense_matmul(s, y));
  DenseMatrix r2 = detail::orthonormalize(bt, completion_rng);
  detail::SmallSvd small = detail::jacobi_svd(ColumnBlock::from_dense(r2), completion_rng);

  DenseMatrix u_full = numkit::matmul(y, small.right);
  DenseMatrix v_full = numkit::matmul(bt.to_dense(), small.left.to_dense());

  TruncatedFactorization f;
  f.u = leading_columns(u_full, k);
  f.v = leading_columns(v_full, k);
  f.singular_values.assign(small.sigma.begin(), small.sigma.begin() + static_cast<std::ptrdiff_t>(k));
  f.rank = k;
  f.power_iterations = options.power_iterations;
  f.seed = options.seed;

  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(f.v(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (f.v(arg, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) f.v(i, j) = -f.v(i, j);
      for (std::size_t i = 0; i < m; ++i) f.u(i, j) = -f.u(i, j);
    }
  }
  return f;
}

EmbeddingPair scale_embeddings(const TruncatedFactorization& f) {
  EmbeddingPair out{f.u, f.v};
  const std::size_t k = f.singular_values.size();
  std::vector<double> root(k);
  for (std::size_t j = 0; j < k; ++j) root[j] = std::sqrt(f.singular_values[j]);
  for (std::size_t i = 0; i < out.user_embedding.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out.user_embedding(i, j) *= root[j];
  for (std::size_t i = 0; i < out.item_embedding.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out.item_embedding(i, j) *= root[j];
  return out;
}

}  // namespace ncerec::embedding
