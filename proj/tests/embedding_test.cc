#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ncerec/embedding/nce.h"
#include "ncerec/embedding/popularity.h"
#include "ncerec/embedding/randomized_svd.h"
#include "ncerec/numkit/kernels.h"
#include "oracle/oracle.h"

using namespace ncerec;
using embedding::SvdOptions;
using numkit::DenseMatrix;
using numkit::SparseMatrix;
using numkit::Triplet;

namespace {

// Column nnz [3, 1]: users 0..2 rated item 0, user 0 also rated item 1.
SparseMatrix counts_3_1() {
  return SparseMatrix::from_triplets(3, 2, std::vector<Triplet>{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {2, 0, 1}});
}

double orthonormality_error(const DenseMatrix& a) {
  const Eigen::MatrixXd e = oracle::to_eigen(a);
  return oracle::max_abs(e.transpose() * e - Eigen::MatrixXd::Identity(e.cols(), e.cols()));
}

}  // namespace

TEST(Popularity, WorkedExamples) {
  const auto p = embedding::item_popularity(counts_3_1());
  EXPECT_EQ(p.item_counts, (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(p.total, 4u);
  EXPECT_DOUBLE_EQ(p.probabilities[0], 0.75);
  EXPECT_DOUBLE_EQ(p.probabilities[1], 0.25);

  std::vector<Triplet> single;
  for (std::size_t i = 0; i < 5; ++i) single.push_back({i, 0, 1});
  EXPECT_EQ(embedding::item_popularity(SparseMatrix::from_triplets(5, 1, single)).probabilities,
            std::vector<double>{1.0});

  const auto even = embedding::item_popularity(SparseMatrix::from_triplets(
      2, 2, std::vector<Triplet>{{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
  EXPECT_EQ(even.probabilities, (std::vector<double>{0.5, 0.5}));

  EXPECT_THROW(embedding::item_popularity(SparseMatrix(3, 3)), std::invalid_argument);
}

TEST(Popularity, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseMatrix r = oracle::random_binary(30, 20, 0.15, rng);
    const auto p = embedding::item_popularity(r);
    EXPECT_EQ(p.total, r.nnz());
    double sum = 0.0;
    for (double v : p.probabilities) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(NceTransform, WorkedExamples) {
  const SparseMatrix d1 = embedding::nce_transform(counts_3_1(), 1.0);
  EXPECT_EQ(d1.nnz(), 4u);
  EXPECT_NEAR(d1.at(1, 0), 0.287682, 1e-6);
  EXPECT_NEAR(d1.at(0, 1), 1.386294, 1e-6);

  const SparseMatrix d2 = embedding::nce_transform(counts_3_1(), 2.0);
  EXPECT_EQ(d2.nnz(), 1u);
  EXPECT_FALSE(d2.contains(0, 0));
  EXPECT_DOUBLE_EQ(d2.at(0, 1), std::log(4.0));

  std::vector<Triplet> single;
  for (std::size_t i = 0; i < 4; ++i) single.push_back({i, 0, 1});
  EXPECT_EQ(embedding::nce_transform(SparseMatrix::from_triplets(4, 2, single), 1.0).nnz(), 0u);
}

TEST(NceTransform, RejectsBadBetaAndEmptyInput) {
  EXPECT_THROW(embedding::nce_transform(counts_3_1(), 0.0), std::invalid_argument);
  EXPECT_THROW(embedding::nce_transform(counts_3_1(), -1.0), std::invalid_argument);
  EXPECT_THROW(embedding::nce_transform(SparseMatrix(2, 2), 1.0), std::invalid_argument);
}

TEST(NceTransform, MatchesDenseDefinitionAndBounds) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const SparseMatrix r = oracle::random_binary(25, 15, 0.2, rng);
    const double beta = 0.5 + 0.1 * static_cast<double>(trial % 10);
    const SparseMatrix d = embedding::nce_transform(r, beta);
    const Eigen::MatrixXd expected = oracle::nce_dense(oracle::to_eigen(r), beta);
    EXPECT_LE(oracle::max_abs(oracle::to_eigen(d) - expected), 1e-14);
    const double log_total = std::log(static_cast<double>(r.nnz()));
    for (double v : d.values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, log_total);
    }
  }
}

TEST(NceTransform, MonotoneInBeta) {
  std::mt19937_64 rng(3);
  const SparseMatrix r = oracle::random_binary(40, 12, 0.3, rng);
  const auto counts = r.col_counts();
  SparseMatrix previous = embedding::nce_transform(r, 0.7);
  for (double beta : {0.8, 0.9, 1.0, 1.1, 1.2, 1.3}) {
    const SparseMatrix next = embedding::nce_transform(r, beta);
    for (const Triplet& t : r.to_triplets()) {
      if (counts[t.col] < 2) continue;
      EXPECT_LE(next.at(t.row, t.col), previous.at(t.row, t.col));
    }
    previous = next;
  }
}

TEST(NceGradient, WorkedExamples) {
  EXPECT_DOUBLE_EQ(embedding::nce_gradient(0.0, 1.0), 0.0);
  EXPECT_NEAR(embedding::nce_gradient(std::log(4.0 / 3.0), 0.75), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(embedding::nce_gradient(0.0, 0.25), 0.375);
}

TEST(NceGradient, VanishesAtTransformedValues) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseMatrix r = oracle::random_binary(50, 30, 0.1, rng);
    const auto p = embedding::item_popularity(r);
    const SparseMatrix d = embedding::nce_transform(r, 1.0);
    for (const Triplet& t : d.to_triplets())
      EXPECT_NEAR(embedding::nce_gradient(t.value, p.probabilities[t.col]), 0.0, 1e-10);
  }
}

TEST(Sigmoid, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(embedding::sigmoid(0.0), 0.5);
  EXPECT_EQ(embedding::sigmoid(-1000.0), 0.0);
  EXPECT_EQ(embedding::sigmoid(1000.0), 1.0);
  EXPECT_NEAR(embedding::sigmoid(2.0) + embedding::sigmoid(-2.0), 1.0, 1e-15);
}

TEST(RandomizedSvd, WorkedExamples) {
  SvdOptions o;
  o.rank = 1;
  const auto f = embedding::randomized_truncated_svd(
      SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 2}}), o);
  ASSERT_EQ(f.singular_values.size(), 1u);
  EXPECT_NEAR(f.singular_values[0], 2.0, 1e-12);
  EXPECT_NEAR(std::abs(f.u(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(f.v(0, 0), 1.0, 1e-12);  // sign convention

  const auto g = embedding::randomized_truncated_svd(
      SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 3}, {1, 1, 1}}), o);
  EXPECT_NEAR(g.singular_values[0], 3.0, 1e-12);
}

TEST(RandomizedSvd, ExactLowRankReconstruction) {
  std::mt19937_64 rng(5);
  const DenseMatrix a = oracle::random_dense(20, 4, rng);
  const DenseMatrix b = oracle::random_dense(4, 15, rng);
  const Eigen::MatrixXd s = oracle::to_eigen(a) * oracle::to_eigen(b);
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) t.push_back({std::size_t(i), std::size_t(j), s(i, j)});
  SvdOptions o;
  o.rank = 4;
  const auto f = embedding::randomized_truncated_svd(SparseMatrix::from_triplets(20, 15, t), o);
  Eigen::VectorXd sigma(4);
  for (int i = 0; i < 4; ++i) sigma(i) = f.singular_values[i];
  const Eigen::MatrixXd rebuilt =
      oracle::to_eigen(f.u) * sigma.asDiagonal() * oracle::to_eigen(f.v).transpose();
  EXPECT_LE((rebuilt - s).norm(), 1e-6 * s.norm());
  const Eigen::VectorXd expected = oracle::singular_values(s);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(sigma(i), expected(i), 1e-6 * expected(i));
}

TEST(RandomizedSvd, OrthonormalOrderedAndDeterministic) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t m = 5 + rng() % 50, n = 5 + rng() % 35;
    const SparseMatrix r = oracle::random_binary(m, n, 0.2, rng);
    SvdOptions o;
    o.rank = 1 + rng() % std::min(m, n);
    o.seed = trial;
    const auto f = embedding::randomized_truncated_svd(r, o);
    EXPECT_LE(orthonormality_error(f.u), 1e-6);
    EXPECT_LE(orthonormality_error(f.v), 1e-6);
    for (std::size_t i = 0; i + 1 < f.singular_values.size(); ++i)
      EXPECT_GE(f.singular_values[i], f.singular_values[i + 1]);
    EXPECT_GE(f.singular_values.back(), 0.0);
    const auto again = embedding::randomized_truncated_svd(r, o);
    EXPECT_EQ(f.u, again.u);
    EXPECT_EQ(f.v, again.v);
    EXPECT_EQ(f.singular_values, again.singular_values);
  }
}

TEST(RandomizedSvd, AllZeroInputGivesZeroSpectrumAndOrthonormalBasis) {
  SvdOptions o;
  o.rank = 3;
  const auto f = embedding::randomized_truncated_svd(SparseMatrix(6, 4), o);
  for (double s : f.singular_values) EXPECT_EQ(s, 0.0);
  EXPECT_LE(orthonormality_error(f.u), 1e-6);
  EXPECT_LE(orthonormality_error(f.v), 1e-6);
}

TEST(RandomizedSvd, RankOutOfRange) {
  SvdOptions o;
  o.rank = 0;
  EXPECT_THROW(embedding::randomized_truncated_svd(counts_3_1(), o), std::invalid_argument);
  o.rank = 3;
  EXPECT_THROW(embedding::randomized_truncated_svd(counts_3_1(), o), std::invalid_argument);
}

TEST(ScaleEmbeddings, WorkedExamples) {
  embedding::TruncatedFactorization f;
  f.u = DenseMatrix::from_rows({{0.6}, {0.8}});
  f.v = DenseMatrix::from_rows({{1.0}});
  f.singular_values = {4.0};
  f.rank = 1;
  const auto e = embedding::scale_embeddings(f);
  EXPECT_EQ(e.user_embedding, DenseMatrix::from_rows({{1.2}, {1.6}}));

  f.u = DenseMatrix::from_rows({{1, 0}, {0, 1}});
  f.v = DenseMatrix::from_rows({{1, 1}});
  f.singular_values = {1.0, 1.0};
  f.rank = 2;
  EXPECT_EQ(embedding::scale_embeddings(f).item_embedding, f.v);

  f.singular_values = {9.0, 4.0};
  EXPECT_EQ(embedding::scale_embeddings(f).item_embedding, DenseMatrix::from_rows({{3, 2}}));
}
