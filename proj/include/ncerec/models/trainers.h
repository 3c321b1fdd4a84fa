#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>

#include "ncerec/embedding/randomized_svd.h"
#include "ncerec/models/hyperparameters.h"
#include "ncerec/models/trained_model.h"
#include "ncerec/numkit/dense_matrix.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::models {

// Rank-k SVD of the depopularized matrix built from `r` with `hyper.beta`.
embedding::TruncatedFactorization nce_factorization(const numkit::SparseMatrix& r,
                                                    const Hyperparameters& hyper);
// Rank-k SVD of `r` itself.
embedding::TruncatedFactorization plain_factorization(const numkit::SparseMatrix& r,
                                                      const Hyperparameters& hyper);

// W = (Q^T Q + lambda I)^{-1} Q^T R, returned as n x k.
numkit::DenseMatrix fit_global_weights(const numkit::SparseMatrix& r, const numkit::DenseMatrix& q,
                                       double lambda);

// Per item j, w_j = (Q^T C_j Q + lambda I)^{-1} Q^T C_j r_j with
// C_j = diag(1 + alpha r_j). Only the rows observed for item j enter the
// rank update on top of the shared Q^T Q. Returned as n x k.
numkit::DenseMatrix fit_weighted_weights(const numkit::SparseMatrix& r,
                                         const numkit::DenseMatrix& q, double alpha,
                                         double lambda);

// Projected regression on top of a given item embedding. `kind` must be
// one of the regression kinds.
TrainedModel fit_projected_regression(ModelKind kind, const numkit::SparseMatrix& r,
                                      numkit::DenseMatrix item_embedding,
                                      const Hyperparameters& hyper);

TrainedModel train_nce_plrec(const numkit::SparseMatrix& r, const Hyperparameters& hyper);
TrainedModel train_nce_plrec_weighted(const numkit::SparseMatrix& r, const Hyperparameters& hyper);
TrainedModel train_plrec(const numkit::SparseMatrix& r, const Hyperparameters& hyper);
TrainedModel train_puresvd(const numkit::SparseMatrix& r, const Hyperparameters& hyper);
TrainedModel train_nce_svd(const numkit::SparseMatrix& r, const Hyperparameters& hyper);
TrainedModel train_pop(const numkit::SparseMatrix& r);

TrainedModel train(ModelKind kind, const numkit::SparseMatrix& r, const Hyperparameters& hyper);

// Trains models on one fixed matrix, reusing factorizations across calls
// that share (beta, rank, power iterations, seed). Grid searches spend
// most of their time in the SVD, and lambda/alpha do not change it.
class CachingTrainer {
 public:
  explicit CachingTrainer(const numkit::SparseMatrix& r) : r_(r) {}

  TrainedModel operator()(ModelKind kind, const Hyperparameters& hyper);

 private:
  using Key = std::tuple<bool, double, std::size_t, std::size_t, std::uint64_t>;
  const embedding::TruncatedFactorization& factorization(bool nce, const Hyperparameters& hyper);

  const numkit::SparseMatrix& r_;
  std::map<Key, embedding::TruncatedFactorization> cache_;
};

}  // namespace ncerec::models
