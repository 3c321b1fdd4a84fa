#include "ncerec/models/trainers.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "ncerec/embedding/nce.h"
#include "ncerec/errors.h"
#include "ncerec/numkit/kernels.h"

namespace ncerec::models {
namespace {

using numkit::DenseMatrix;
using numkit::SparseMatrix;

void require_interactions(const SparseMatrix& r) {
  if (r.nnz() == 0) throw std::invalid_argument("training matrix has no interactions");
}

std::vector<double> counts_of(const SparseMatrix& r) {
  std::vector<double> out(r.cols());
  for (std::size_t j = 0; j < r.cols(); ++j) out[j] = static_cast<double>(r.col_nnz(j));
  return out;
}

TrainedModel shell(ModelKind kind, const SparseMatrix& r, const Hyperparameters& hyper) {
  TrainedModel m;
  m.kind = kind;
  m.hyper = hyper;
  m.num_users = r.rows();
  m.num_items = r.cols();
  m.popularity = counts_of(r);
  return m;
}

embedding::SvdOptions svd_options(const Hyperparameters& hyper) {
  return {hyper.rank, hyper.power_iterations, 10, hyper.seed};
}

TrainedModel svd_model(ModelKind kind, const SparseMatrix& r, const Hyperparameters& hyper,
                       const embedding::TruncatedFactorization& f) {
  TrainedModel m = shell(kind, r, hyper);
  if (kind == ModelKind::kNceSvd) {
    embedding::EmbeddingPair pair = embedding::scale_embeddings(f);
    m.user_factor = std::move(pair.user_embedding);
    m.item_embedding = std::move(pair.item_embedding);
  } else {
    DenseMatrix us = f.u;
    for (std::size_t i = 0; i < us.rows(); ++i)
      for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.singular_values[j];
    m.user_factor = std::move(us);
    m.item_embedding = f.v;
  }
  return m;
}

TrainedModel from_factorization(ModelKind kind, const SparseMatrix& r, const Hyperparameters& hyper,
                                const embedding::TruncatedFactorization& f) {
  switch (kind) {
    case ModelKind::kNcePlrec:
    case ModelKind::kNcePlrecWeighted:
      return fit_projected_regression(kind, r, embedding::scale_embeddings(f).item_embedding, hyper);
    case ModelKind::kPlrec:
      return fit_projected_regression(kind, r, f.v, hyper);
    case ModelKind::kPureSvd:
    case ModelKind::kNceSvd:
      return svd_model(kind, r, hyper, f);
    case ModelKind::kPop:
      break;
  }
  throw std::logic_error("from_factorization: kind has no factorization");
}

}  // namespace

embedding::TruncatedFactorization nce_factorization(const SparseMatrix& r,
                                                    const Hyperparameters& hyper) {
  require_interactions(r);
  return embedding::randomized_truncated_svd(embedding::nce_transform(r, hyper.beta),
                                             svd_options(hyper));
}

embedding::TruncatedFactorization plain_factorization(const SparseMatrix& r,
                                                      const Hyperparameters& hyper) {
  require_interactions(r);
  return embedding::randomized_truncated_svd(r, svd_options(hyper));
}

DenseMatrix fit_global_weights(const SparseMatrix& r, const DenseMatrix& q, double lambda) {
  if (q.rows() != r.rows()) throw ShapeError("fit_global_weights: Q rows differ from R rows");
  DenseMatrix a = numkit::gram(q);
  numkit::add_to_diagonal(a, lambda);
  const DenseMatrix rtq = numkit::sparse_transpose_dense_matmul(r, q);  // n x k = (Q^T R)^T
  return numkit::spd_solve(a, rtq.transposed()).transposed();
}

DenseMatrix fit_weighted_weights(const SparseMatrix& r, const DenseMatrix& q, double alpha,
                                 double lambda) {
  if (q.rows() != r.rows()) throw ShapeError("fit_weighted_weights: Q rows differ from R rows");
  if (alpha < -1.0) throw std::invalid_argument("fit_weighted_weights: alpha must be >= -1");
  const std::size_t k = q.cols();
  const std::size_t n = r.cols();
  DenseMatrix base = numkit::gram(q);
  numkit::add_to_diagonal(base, lambda);
  const DenseMatrix base_factor = numkit::cholesky(base);

  DenseMatrix w(n, k);
  const std::ptrdiff_t items = static_cast<std::ptrdiff_t>(n);
  // Exceptions cannot leave an OpenMP region; remember the first pivot failure.
  bool failed = false;
  std::size_t failed_pivot = 0;
  double failed_value = 0.0;
#pragma omp parallel
  {
    DenseMatrix a(k, k);
    std::vector<double> b(k);
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t jj = 0; jj < items; ++jj) {
      const std::size_t j = static_cast<std::size_t>(jj);
      auto col = r.col(j);
      std::fill(b.begin(), b.end(), 0.0);
      for (std::size_t p = 0; p < col.size(); ++p) {
        const double rv = col.values[p];
        const double c = (1.0 + alpha * rv) * rv;
        const double* qi = q.row(col.rows[p]).data();
        for (std::size_t x = 0; x < k; ++x) b[x] += c * qi[x];
      }
      if (alpha == 0.0 || col.size() == 0) {
        numkit::cholesky_solve_in_place(base_factor, b.data());
        std::copy(b.begin(), b.end(), w.row(j).begin());
        continue;
      }
      {
        std::copy(base.values().begin(), base.values().end(), a.values().begin());
        for (std::size_t p = 0; p < col.size(); ++p) {
          const double c = alpha * col.values[p];
          const double* qi = q.row(col.rows[p]).data();
          for (std::size_t x = 0; x < k; ++x) {
            const double cx = c * qi[x];
            double* arow = a.row(x).data();
            for (std::size_t y = 0; y < k; ++y) arow[y] += cx * qi[y];
          }
        }
      }
      try {
        const DenseMatrix l = numkit::cholesky(a);
        numkit::cholesky_solve_in_place(l, b.data());
        std::copy(b.begin(), b.end(), w.row(j).begin());
      } catch (const NotPositiveDefiniteError& e) {
#pragma omp critical(ncerec_weighted_failure)
        if (!failed) {
          failed = true;
          failed_pivot = e.pivot();
          failed_value = e.value();
        }
      }
    }
  }
  if (failed) throw NotPositiveDefiniteError(failed_pivot, failed_value);
  return w;
}

TrainedModel fit_projected_regression(ModelKind kind, const SparseMatrix& r,
                                      DenseMatrix item_embedding, const Hyperparameters& hyper) {
  if (!uses_regression(kind)) throw std::invalid_argument("fit_projected_regression: not a regression kind");
  if (item_embedding.rows() != r.cols()) throw ShapeError("fit_projected_regression: embedding rows");
  const DenseMatrix q = numkit::sparse_dense_matmul(r, item_embedding);
  TrainedModel m = shell(kind, r, hyper);
  m.weights = kind == ModelKind::kNcePlrecWeighted
                  ? fit_weighted_weights(r, q, hyper.alpha, hyper.lambda)
                  : fit_global_weights(r, q, hyper.lambda);
  m.item_embedding = std::move(item_embedding);
  return m;
}

TrainedModel train_nce_plrec(const SparseMatrix& r, const Hyperparameters& hyper) {
  hyper.validate();
  return from_factorization(ModelKind::kNcePlrec, r, hyper, nce_factorization(r, hyper));
}

TrainedModel train_nce_plrec_weighted(const SparseMatrix& r, const Hyperparameters& hyper) {
  hyper.validate();
  return from_factorization(ModelKind::kNcePlrecWeighted, r, hyper, nce_factorization(r, hyper));
}

TrainedModel train_plrec(const SparseMatrix& r, const Hyperparameters& hyper) {
  hyper.validate();
  return from_factorization(ModelKind::kPlrec, r, hyper, plain_factorization(r, hyper));
}

TrainedModel train_puresvd(const SparseMatrix& r, const Hyperparameters& hyper) {
  hyper.validate();
  return from_factorization(ModelKind::kPureSvd, r, hyper, plain_factorization(r, hyper));
}

TrainedModel train_nce_svd(const SparseMatrix& r, const Hyperparameters& hyper) {
  hyper.validate();
  return from_factorization(ModelKind::kNceSvd, r, hyper, nce_factorization(r, hyper));
}

TrainedModel train_pop(const SparseMatrix& r) {
  require_interactions(r);
  return shell(ModelKind::kPop, r, Hyperparameters{});
}

TrainedModel train(ModelKind kind, const SparseMatrix& r, const Hyperparameters& hyper) {
  switch (kind) {
    case ModelKind::kNcePlrec: return train_nce_plrec(r, hyper);
    case ModelKind::kNcePlrecWeighted: return train_nce_plrec_weighted(r, hyper);
    case ModelKind::kPlrec: return train_plrec(r, hyper);
    case ModelKind::kPureSvd: return train_puresvd(r, hyper);
    case ModelKind::kNceSvd: return train_nce_svd(r, hyper);
    case ModelKind::kPop: {
      TrainedModel m = train_pop(r);
      m.hyper = hyper;
      return m;
    }
  }
  throw std::logic_error("train: unknown kind");
}

const embedding::TruncatedFactorization& CachingTrainer::factorization(bool nce,
                                                                       const Hyperparameters& hyper) {
  const Key key{nce, nce ? hyper.beta : 0.0, hyper.rank, hyper.power_iterations, hyper.seed};
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, nce ? nce_factorization(r_, hyper) : plain_factorization(r_, hyper)).first;
  }
  return it->second;
}

TrainedModel CachingTrainer::operator()(ModelKind kind, const Hyperparameters& hyper) {
  if (kind == ModelKind::kPop) return train(kind, r_, hyper);
  hyper.validate();
  return from_factorization(kind, r_, hyper, factorization(uses_nce(kind), hyper));
}

}  // namespace ncerec::models
