#include "embedding/jacobi_svd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncerec::embedding::detail {
namespace {

using Index = std::ptrdiff_t;

constexpr double kDependentTolerance = 1e-13;
constexpr int kMaxSweeps = 80;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// One projection pass of column j against columns [0, j). Adds the
// coefficients to `coeffs`.
void project_out(ColumnBlock& block, std::size_t j, std::vector<double>& coeffs) {
  const std::size_t len = block.length();
  std::vector<double> h(j);
  const bool big = j * len > 16384;
  const Index jj = static_cast<Index>(j);
#pragma omp parallel for schedule(static) if (big)
  for (Index i = 0; i < jj; ++i)
    h[static_cast<std::size_t>(i)] = dot(block.col(static_cast<std::size_t>(i)), block.col(j));
  auto y = block.col(j);
  const Index ll = static_cast<Index>(len);
#pragma omp parallel for schedule(static) if (big)
  for (Index r = 0; r < ll; ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += h[i] * block.col(i)[static_cast<std::size_t>(r)];
    y[static_cast<std::size_t>(r)] -= s;
  }
  for (std::size_t i = 0; i < j; ++i) coeffs[i] += h[i];
}

// Gram-Schmidt with up to three passes. Returns the residual norm.
double orthogonalize_column(ColumnBlock& block, std::size_t j, std::vector<double>& coeffs) {
  double previous = norm(block.col(j));
  double current = previous;
  for (int pass = 0; pass < 3; ++pass) {
    project_out(block, j, coeffs);
    current = norm(block.col(j));
    if (pass >= 1 && current > 0.5 * previous) break;
    previous = current;
  }
  return current;
}

}  // namespace

ColumnBlock ColumnBlock::from_dense(const numkit::DenseMatrix& m) {
  ColumnBlock b(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) b.data_[j * b.length_ + i] = row[j];
  }
  return b;
}

numkit::DenseMatrix ColumnBlock::to_dense() const {
  numkit::DenseMatrix m(length_, count_);
  for (std::size_t j = 0; j < count_; ++j) {
    auto c = col(j);
    for (std::size_t i = 0; i < length_; ++i) m(i, j) = c[i];
  }
  return m;
}

numkit::DenseMatrix orthonormalize(ColumnBlock& block, std::mt19937_64& rng) {
  const std::size_t n = block.count();
  if (n > block.length()) throw std::invalid_argument("orthonormalize: more columns than rows");
  numkit::DenseMatrix r(n, n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> coeffs;
  for (std::size_t j = 0; j < n; ++j) {
    const double original = norm(block.col(j));
    coeffs.assign(j, 0.0);
    double residual = orthogonalize_column(block, j, coeffs);
    for (std::size_t i = 0; i < j; ++i) r(i, j) = coeffs[i];
    if (original > 0.0 && residual > kDependentTolerance * original) {
      r(j, j) = residual;
    } else {
      // Dependent column: its contribution is fully captured by R(:, j) above
      // the diagonal. Fill the slot with a fresh direction.
      r(j, j) = 0.0;
      do {
        for (double& v : block.col(j)) v = gauss(rng);
        const double fresh = norm(block.col(j));
        std::vector<double> ignored(j, 0.0);
        residual = orthogonalize_column(block, j, ignored);
        if (residual > 1e-6 * fresh) break;
      } while (true);
    }
    const double inv = 1.0 / residual;
    for (double& v : block.col(j)) v *= inv;
  }
  return r;
}

SmallSvd jacobi_svd(ColumnBlock x, std::mt19937_64& rng) {
  const std::size_t n = x.count();
  if (x.length() != n) throw std::invalid_argument("jacobi_svd: matrix must be square");
  ColumnBlock w(n, n);
  for (std::size_t j = 0; j < n; ++j) w.col(j)[j] = 1.0;

  // Round-robin tournament over an even number of slots; slot n (if any) is a bye.
  const std::size_t slots = n + (n % 2);
  std::vector<std::size_t> order(slots);
  std::iota(order.begin(), order.end(), 0);
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<std::size_t>(n, 1));

  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    bool rotated = false;
    for (std::size_t round = 0; round + 1 < slots; ++round) {
      const Index pairs = static_cast<Index>(slots / 2);
#pragma omp parallel for schedule(static) reduction(|| : rotated)
      for (Index t = 0; t < pairs; ++t) {
        std::size_t p = order[static_cast<std::size_t>(t)];
        std::size_t q = order[slots - 1 - static_cast<std::size_t>(t)];
        if (p >= n || q >= n) continue;
        if (p > q) std::swap(p, q);
        auto xp = x.col(p);
        auto xq = x.col(q);
        const double alpha = dot(xp, xp);
        const double beta = dot(xq, xq);
        const double gamma = dot(xp, xq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t_rot = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t_rot * t_rot);
        const double s = c * t_rot;
        for (std::size_t i = 0; i < n; ++i) {
          const double a = xp[i];
          const double b = xq[i];
          xp[i] = c * a - s * b;
          xq[i] = s * a + c * b;
        }
        auto wp = w.col(p);
        auto wq = w.col(q);
        for (std::size_t i = 0; i < n; ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = c * a - s * b;
          wq[i] = s * a + c * b;
        }
        rotated = true;
      }
      // Rotate every slot but the first one position.
      std::rotate(order.begin() + 1, order.end() - 1, order.end());
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(x.col(j));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SmallSvd out;
  out.left = ColumnBlock(n, n);
  out.sigma.resize(n);
  out.right = numkit::DenseMatrix(n, n);
  const double largest = n > 0 ? sigma[idx[0]] : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = idx[j];
    out.sigma[j] = sigma[src];
    auto dst = out.left.col(j);
    // Columns at roundoff level carry no direction; orthonormalize() refills them.
    if (sigma[src] > 0.0 && sigma[src] > 1e-14 * largest) {
      auto col = x.col(src);
      for (std::size_t i = 0; i < n; ++i) dst[i] = col[i] / sigma[src];
    }
    auto wc = w.col(src);
    for (std::size_t i = 0; i < n; ++i) out.right(i, j) = wc[i];
  }
  orthonormalize(out.left, rng);
  return out;
}

}  // namespace ncerec::embedding::detail
