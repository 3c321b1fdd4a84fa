#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>
#include <map>
#include <set>

#include "ncerec/eval/analysis.h"
#include "ncerec/eval/evaluate.h"
#include "ncerec/eval/grid_search.h"
#include "ncerec/eval/metrics.h"
#include "ncerec/eval/split.h"
#include "ncerec/models/trainers.h"
#include "oracle/oracle.h"

using namespace ncerec;
using eval::Interaction;
using eval::MetricConfig;
using numkit::SparseMatrix;
using numkit::Triplet;

namespace {

std::vector<Interaction> user_events(std::size_t user, std::size_t count, std::size_t offset = 0) {
  std::vector<Interaction> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back({user, offset + i, 5.0, static_cast<std::int64_t>(1000 - i)});
  return out;
}

std::set<std::pair<std::size_t, std::size_t>> cells(const SparseMatrix& m) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const Triplet& t : m.to_triplets()) out.emplace(t.row, t.col);
  return out;
}

}  // namespace

TEST(Binarize, StrictThreshold) {
  const std::vector<Interaction> r{{0, 0, 3}, {0, 1, 4}, {0, 2, 5}};
  const auto kept = eval::binarize(r, 3.0);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].rating, 4.0);
  EXPECT_TRUE(eval::binarize(r, 5.0).empty());
  const std::vector<Interaction> yahoo{{0, 0, 40}, {0, 1, 60}};
  ASSERT_EQ(eval::binarize(yahoo, 50.0).size(), 1u);
  EXPECT_EQ(eval::binarize(yahoo, 50.0)[0].item, 1u);
}

TEST(Split, Sizes) {
  EXPECT_EQ(eval::split_sizes(10).train, 5u);
  EXPECT_EQ(eval::split_sizes(10).valid, 2u);
  EXPECT_EQ(eval::split_sizes(10).test, 3u);
  EXPECT_EQ(eval::split_sizes(3).train, 1u);
  EXPECT_EQ(eval::split_sizes(3).valid, 0u);
  EXPECT_EQ(eval::split_sizes(3).test, 2u);
  EXPECT_EQ(eval::split_sizes(1).train, 0u);
  EXPECT_EQ(eval::split_sizes(1).test, 1u);
}

TEST(ChronologicalSplit, CutsByTimeThenItem) {
  auto events = user_events(0, 10);  // timestamps descend with item index
  events.push_back({1, 0, 5.0, 7});
  events.push_back({1, 1, 5.0, 7});
  events.push_back({1, 2, 5.0, 3});
  const auto s = eval::chronological_split(events, 2, 10);
  EXPECT_EQ(s.train.row_nnz(0), 5u);
  EXPECT_EQ(s.valid.row_nnz(0), 2u);
  EXPECT_EQ(s.test.row_nnz(0), 3u);
  // Latest items (lowest index) land in test.
  EXPECT_TRUE(s.test.contains(0, 0));
  EXPECT_TRUE(s.train.contains(0, 9));
  // User 1: item 2 is earliest; items 0 and 1 tie at t=7 and go in index order.
  EXPECT_TRUE(s.train.contains(1, 2));
  EXPECT_TRUE(s.test.contains(1, 0));
  EXPECT_TRUE(s.test.contains(1, 1));
}

TEST(ChronologicalSplit, RequiresTimestampsAndDedupes) {
  std::vector<Interaction> events{{0, 0, 5.0, std::nullopt}};
  EXPECT_THROW(eval::chronological_split(events, 1, 1), std::invalid_argument);
  std::vector<Interaction> repeated{{0, 0, 5, 10}, {0, 0, 5, 1}, {0, 1, 5, 5}};
  const auto s = eval::chronological_split(repeated, 1, 2);
  EXPECT_EQ(s.train.nnz() + s.valid.nnz() + s.test.nnz(), 2u);
  EXPECT_TRUE(s.train.contains(0, 0));  // earliest occurrence at t=1
}

TEST(Split, FuzzDisjointUnionAndOrder) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 1 + rng() % 20, n = 1 + rng() % 30;
    std::vector<Interaction> events;
    std::set<std::pair<std::size_t, std::size_t>> expected;
    const std::size_t count = rng() % 200;
    for (std::size_t e = 0; e < count; ++e) {
      Interaction x{rng() % m, rng() % n, 5.0, static_cast<std::int64_t>(rng() % 50)};
      expected.emplace(x.user, x.item);
      events.push_back(x);
    }
    for (bool chrono : {true, false}) {
      const auto s = chrono ? eval::chronological_split(events, m, n)
                            : eval::random_split(events, m, n, trial);
      const auto a = cells(s.train), b = cells(s.valid), c = cells(s.test);
      EXPECT_EQ(a.size() + b.size() + c.size(), expected.size());
      std::set<std::pair<std::size_t, std::size_t>> all = a;
      all.insert(b.begin(), b.end());
      all.insert(c.begin(), c.end());
      EXPECT_EQ(all, expected);
      for (std::size_t u = 0; u < m; ++u) {
        const std::size_t nu = s.train.row_nnz(u) + s.valid.row_nnz(u) + s.test.row_nnz(u);
        const auto sizes = eval::split_sizes(nu);
        EXPECT_EQ(s.train.row_nnz(u), sizes.train);
        EXPECT_EQ(s.valid.row_nnz(u), sizes.valid);
      }
      if (!chrono) continue;
      // Every train timestamp <= every valid timestamp <= every test timestamp.
      std::map<std::pair<std::size_t, std::size_t>, std::int64_t> first;
      for (const auto& e : events) {
        auto key = std::make_pair(e.user, e.item);
        auto it = first.find(key);
        if (it == first.end() || *e.timestamp < it->second) first[key] = *e.timestamp;
      }
      for (std::size_t u = 0; u < m; ++u) {
        auto latest = [&](const SparseMatrix& x) {
          std::int64_t t = std::numeric_limits<std::int64_t>::min();
          for (auto j : x.row(u).cols) t = std::max(t, first[{u, j}]);
          return t;
        };
        auto earliest = [&](const SparseMatrix& x) {
          std::int64_t t = std::numeric_limits<std::int64_t>::max();
          for (auto j : x.row(u).cols) t = std::min(t, first[{u, j}]);
          return t;
        };
        EXPECT_LE(latest(s.train), earliest(s.valid));
        EXPECT_LE(latest(s.train), earliest(s.test));
        EXPECT_LE(latest(s.valid), earliest(s.test));
      }
    }
  }
}

TEST(RandomSplit, SeedDeterminesSplit) {
  const auto events = user_events(0, 10);
  const auto a = eval::random_split(events, 1, 10, 3);
  const auto b = eval::random_split(events, 1, 10, 3);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train.nnz(), 5u);
  EXPECT_EQ(a.valid.nnz(), 2u);
  EXPECT_EQ(a.test.nnz(), 3u);
}

TEST(RankMetrics, HandExample) {
  // relevant {a=1, b=2}; ranking [a, x, b, y, z].
  const std::vector<std::size_t> ranked{1, 10, 2, 11, 12};
  const std::vector<std::size_t> relevant{1, 2};
  MetricConfig c;
  c.ks = {5};
  const auto m = eval::rank_metrics(ranked, relevant, c);
  ASSERT_TRUE(m);
  EXPECT_DOUBLE_EQ(m->precision[0], 0.4);
  EXPECT_DOUBLE_EQ(m->recall[0], 1.0);
  EXPECT_DOUBLE_EQ(m->r_precision, 0.5);
  EXPECT_NEAR(m->ndcg, (1.0 + 1.0 / std::log2(4.0)) / (1.0 + 1.0 / std::log2(3.0)), 1e-15);
  EXPECT_NEAR(m->ndcg, 0.9197, 1e-4);
}

TEST(RankMetrics, PerfectNoHitsAndSkippedUsers) {
  MetricConfig c;
  const std::vector<std::size_t> rel{3, 4, 5};
  const auto perfect = eval::rank_metrics(std::vector<std::size_t>{5, 3, 4, 9}, rel, c);
  EXPECT_EQ(perfect->ndcg, 1.0);
  EXPECT_EQ(perfect->r_precision, 1.0);
  const auto none = eval::rank_metrics(std::vector<std::size_t>{0, 1, 2}, rel, c);
  EXPECT_EQ(none->ndcg, 0.0);
  EXPECT_EQ(none->r_precision, 0.0);
  for (double p : none->precision) EXPECT_EQ(p, 0.0);
  EXPECT_FALSE(eval::rank_metrics(std::vector<std::size_t>{0}, {}, c).has_value());
}

TEST(RankMetrics, MatchesBruteForceAndBounds) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    MetricConfig c;
    c.ks = {1 + rng() % 5, 6 + rng() % 10, 20};
    c.ndcg_depth = 1 + rng() % 60;
    const std::size_t n = 5 + rng() % 100;
    std::vector<std::size_t> items(n);
    for (std::size_t i = 0; i < n; ++i) items[i] = i;
    std::shuffle(items.begin(), items.end(), rng);
    const std::vector<std::size_t> ranked(items.begin(), items.begin() + rng() % (n + 1));
    std::shuffle(items.begin(), items.end(), rng);
    std::vector<std::size_t> relevant(items.begin(), items.begin() + 1 + rng() % n);
    const auto m = eval::rank_metrics(ranked, relevant, c);
    const auto o = oracle::metrics(ranked, relevant, c);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->flatten(), o.flatten());
    for (double v : m->flatten()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    for (std::size_t i = 1; i < c.ks.size(); ++i) {
      EXPECT_GE(m->recall[i], m->recall[i - 1]);
      EXPECT_GE(m->precision[i] * c.ks[i], m->precision[i - 1] * c.ks[i - 1] - 1e-12);
    }
  }
}

TEST(MetricConfig, NamesAndValidation) {
  MetricConfig c;
  EXPECT_EQ(c.names(), (std::vector<std::string>{"NDCG", "R-Precision", "Precision@5",
                                                  "Precision@10", "Precision@20", "Precision@50",
                                                  "Recall@5", "Recall@10", "Recall@20",
                                                  "Recall@50"}));
  EXPECT_EQ(c.list_length(), 50u);
  c.ks = {};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Aggregate, WorkedExamples) {
  const auto flat = eval::aggregate("NDCG", {0.5, 0.5, 0.5});
  EXPECT_EQ(flat.mean, 0.5);
  EXPECT_EQ(flat.ci_half_width, 0.0);
  const auto two = eval::aggregate("NDCG", {0.0, 1.0});
  EXPECT_DOUBLE_EQ(two.mean, 0.5);
  EXPECT_NEAR(two.ci_half_width, 0.98, 1e-12);
  EXPECT_EQ(two.user_count, 2u);
  const auto one = eval::aggregate("NDCG", {0.3});
  EXPECT_TRUE(one.degenerate_ci);
  EXPECT_EQ(one.ci_half_width, 0.0);
  EXPECT_THROW(eval::aggregate("NDCG", {}), std::invalid_argument);
}

TEST(Aggregate, PermutationInvariantMean) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u;
  std::vector<double> values(997);
  for (double& v : values) v = u(rng);
  const auto base = eval::aggregate("x", values);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(values.begin(), values.end(), rng);
    const auto again = eval::aggregate("x", values);
    EXPECT_EQ(again.mean, base.mean);
    EXPECT_EQ(again.ci_half_width, base.ci_half_width);
  }
}

TEST(Quantile, Type7) {
  EXPECT_EQ(eval::quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_EQ(eval::quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_EQ(eval::quantile({3, 1}, 0.5), 2.0);
  EXPECT_EQ(eval::quantile({7}, 0.9), 7.0);
  EXPECT_THROW(eval::quantile({}, 0.5), std::invalid_argument);
}

TEST(UserBuckets, WorkedExamples) {
  const std::vector<double> counts{1, 2, 3, 4};
  const auto m = eval::aggregate("NDCG", {0.1, 0.2, 0.3, 0.4});
  const auto b = eval::user_buckets(counts, std::span(&m, 1));
  for (const auto& members : b.members) EXPECT_EQ(members.size(), 1u);
  EXPECT_DOUBLE_EQ(b.metrics[0].second[3].mean, 0.4);

  const std::vector<double> equal{5, 5, 5};
  const auto e = eval::aggregate("NDCG", {0.1, 0.2, 0.3});
  const auto be = eval::user_buckets(equal, std::span(&e, 1));
  EXPECT_EQ(be.members[0].size(), 3u);
  EXPECT_TRUE(be.members[1].empty() && be.members[2].empty() && be.members[3].empty());
}

TEST(UserBuckets, PartitionOnRandomCounts) {
  std::mt19937_64 rng(34);
  std::vector<double> counts(301), values(301);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] = static_cast<double>(rng() % 40);
    values[i] = 0.01 * static_cast<double>(i % 100);
  }
  const auto m = eval::aggregate("R", values);
  const auto b = eval::user_buckets(counts, std::span(&m, 1));
  std::vector<int> seen(counts.size(), 0);
  for (std::size_t k = 0; k < 4; ++k)
    for (auto i : b.members[k]) {
      ++seen[i];
      EXPECT_LE(counts[i], b.edges[k]);
      if (k > 0) EXPECT_GT(counts[i], b.edges[k - 1]);
    }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(PopularityDistribution, DirectLookup) {
  const std::vector<std::size_t> item_counts{3, 1, 2};
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> top1{{"m", {0, 1}}};
  const auto s = eval::top1_popularity_distribution(top1, item_counts);
  EXPECT_EQ(s[0].top1_popularity, (std::vector<double>{3, 1}));
  EXPECT_EQ(s[0].median, 2.0);
}

TEST(PopularityDistribution, PopTopEqualsMaxAndNceSvdIsLessPopularThanPlrec) {
  // Skewed corpus: item j is rated with probability decaying in j.
  std::mt19937_64 rng(35);
  std::vector<Triplet> t;
  const std::size_t m = 120, n = 60;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::bernoulli_distribution(0.6 * std::pow(0.93, static_cast<double>(j)) + 0.02)(rng))
        t.push_back({i, j, 1.0});
  const SparseMatrix r = SparseMatrix::from_triplets(m, n, t);
  const auto counts = r.col_counts();
  const std::size_t max_count = *std::max_element(counts.begin(), counts.end());
  models::Hyperparameters h;
  h.rank = 8;
  h.lambda = 1.0;

  auto top1_of = [&](models::ModelKind kind) {
    const auto model = models::train(kind, r, h);
    std::vector<std::size_t> items;
    for (const auto& [u, j] : eval::top1_items(model, r, {})) items.push_back(j);
    return std::make_pair(std::string(models::to_string(kind)), items);
  };
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> top1{
      top1_of(models::ModelKind::kPop), top1_of(models::ModelKind::kNceSvd),
      top1_of(models::ModelKind::kPlrec)};
  const auto s = eval::top1_popularity_distribution(top1, counts);
  for (double p : s[0].top1_popularity) EXPECT_EQ(p, static_cast<double>(max_count));
  EXPECT_LT(s[1].median, s[2].median);
}

TEST(GridSearch, PointsOrderAndRanges) {
  const auto full = eval::HyperparameterGrid::full_ranges();
  EXPECT_EQ(full.ranks, (std::vector<std::size_t>{50, 100, 200, 500}));
  EXPECT_EQ(full.betas.size(), 7u);
  EXPECT_EQ(full.alphas.size(), 10u);
  EXPECT_EQ(full.lambdas.size(), 6u);
  eval::HyperparameterGrid g;
  g.ranks = {1, 2};
  g.betas = {0.5, 1.5};
  g.lambdas = {0.1, 1.0};
  const auto p = g.points();
  ASSERT_EQ(p.size(), 8u);
  EXPECT_EQ(p[0].rank, 1u);
  EXPECT_EQ(p[1].lambda, 1.0);
  EXPECT_EQ(p[2].beta, 1.5);
  EXPECT_EQ(p[4].rank, 2u);
  const auto plrec = eval::HyperparameterGrid::ranges_for(models::ModelKind::kPlrec);
  EXPECT_EQ(plrec.betas, std::vector<double>{1.0});
  EXPECT_EQ(plrec.alphas, std::vector<double>{0.0});
}

TEST(GridSearch, SelectionTiesFailuresAndSweep) {
  auto trainer = [](const models::Hyperparameters& h) {
    if (h.lambda > 50) throw std::runtime_error("diverged");
    models::TrainedModel m;
    m.hyper = h;
    return m;
  };
  eval::HyperparameterGrid single;
  const auto one = eval::grid_search(trainer, single, [](const models::TrainedModel&) { return 0.3; });
  EXPECT_EQ(one.best, models::Hyperparameters{});
  EXPECT_EQ(one.points.size(), 1u);

  eval::HyperparameterGrid g;
  g.ranks = {10, 5};
  g.betas = {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  g.lambdas = {1.0, 0.1, 100.0};
  // Score depends only on beta; peak at 1.1, ties across rank and lambda.
  const auto r = eval::grid_search(trainer, g, [](const models::TrainedModel& m) {
    return -std::abs(m.hyper.beta - 1.1);
  });
  EXPECT_DOUBLE_EQ(r.best.beta, 1.1);
  EXPECT_EQ(r.best.rank, 5u);
  EXPECT_EQ(r.best.lambda, 0.1);
  ASSERT_EQ(r.beta_sweep.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(r.beta_sweep[i].first, g.betas[i]);
  std::size_t failed = 0;
  for (const auto& p : r.points) failed += p.ok ? 0 : 1;
  EXPECT_EQ(failed, 14u);

  eval::HyperparameterGrid bad;
  bad.lambdas = {100.0};
  EXPECT_THROW(eval::grid_search(trainer, bad, [](const models::TrainedModel&) { return 0.0; }),
               std::runtime_error);
}

TEST(Evaluate, PerfectModelScoresOne) {
  // Target items are exactly the most popular unseen items for each user.
  const SparseMatrix train = SparseMatrix::from_triplets(
      3, 4, std::vector<Triplet>{{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {0, 1, 1}, {1, 1, 1}, {2, 2, 1}});
  const SparseMatrix target =
      SparseMatrix::from_triplets(3, 4, std::vector<Triplet>{{0, 2, 1}, {1, 2, 1}, {2, 1, 1}});
  const auto model = models::train_pop(train);
  MetricConfig c;
  c.ks = {1};
  c.ndcg_depth = 1;
  const SparseMatrix* exclude[] = {&train};
  const auto report = eval::evaluate_model(model, train, exclude, target, c);
  EXPECT_EQ(report.users, (std::vector<std::size_t>{0, 1, 2}));
  for (const auto& m : report.metrics) EXPECT_EQ(m.mean, 1.0) << m.name;
  EXPECT_EQ(report.metrics.size(), c.names().size());
}

TEST(Evaluate, ColdstartOfTrainingUserMatchesWarm) {
  std::mt19937_64 rng(36);
  const SparseMatrix train = oracle::random_binary(40, 30, 0.2, rng);
  const SparseMatrix target = oracle::random_binary(40, 30, 0.1, rng);
  models::Hyperparameters h;
  h.rank = 5;
  const auto model = models::train_nce_plrec(train, h);
  const SparseMatrix* exclude[] = {&train};
  const auto warm = eval::evaluate_model(model, train, exclude, target, MetricConfig{});
  const auto cold = eval::evaluate_coldstart(model, train, target, warm.users, MetricConfig{});
  EXPECT_EQ(cold.users, warm.users);
  for (std::size_t i = 0; i < warm.metrics.size(); ++i)
    EXPECT_EQ(cold.metrics[i].per_user, warm.metrics[i].per_user);

  const auto diff = eval::paired_difference(warm, cold, "Recall@50");
  EXPECT_EQ(diff.users.size(), warm.users.size());
  EXPECT_EQ(diff.mean_difference, 0.0);
}
