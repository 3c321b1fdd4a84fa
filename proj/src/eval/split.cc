#include "ncerec/eval/split.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ncerec::eval {
namespace {

using numkit::SparseMatrix;
using numkit::Triplet;

std::vector<std::vector<Interaction>> by_user(std::span<const Interaction> interactions,
                                              std::size_t num_users, std::size_t num_items) {
  std::vector<std::vector<Interaction>> groups(num_users);
  for (const auto& x : interactions) {
    if (x.user >= num_users || x.item >= num_items) {
      throw std::out_of_range("split: interaction (" + std::to_string(x.user) + ", " +
                              std::to_string(x.item) + ") outside the index space");
    }
    groups[x.user].push_back(x);
  }
  return groups;
}

// `ordered` holds one user's distinct items in cut order.
void cut(std::size_t user, const std::vector<std::size_t>& ordered, std::vector<Triplet>& train,
         std::vector<Triplet>& valid, std::vector<Triplet>& test) {
  const SplitSizes sizes = split_sizes(ordered.size());
  for (std::size_t p = 0; p < ordered.size(); ++p) {
    auto& dst = p < sizes.train ? train : (p < sizes.train + sizes.valid ? valid : test);
    dst.push_back({user, ordered[p], 1.0});
  }
}

EvalSplit assemble(std::size_t num_users, std::size_t num_items, std::vector<Triplet> train,
                   std::vector<Triplet> valid, std::vector<Triplet> test, SplitMode mode) {
  EvalSplit s;
  s.train = SparseMatrix::from_triplets(num_users, num_items, std::move(train));
  s.valid = SparseMatrix::from_triplets(num_users, num_items, std::move(valid));
  s.test = SparseMatrix::from_triplets(num_users, num_items, std::move(test));
  s.mode = mode;
  return s;
}

}  // namespace

std::vector<Interaction> binarize(std::span<const Interaction> ratings, double threshold) {
  std::vector<Interaction> out;
  for (const auto& x : ratings)
    if (x.rating > threshold) out.push_back(x);
  return out;
}

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::kChronological ? "chronological" : "random";
}

SplitMode parse_split_mode(std::string_view name) {
  if (name == "chronological") return SplitMode::kChronological;
  if (name == "random") return SplitMode::kRandom;
  throw std::invalid_argument("unknown split mode '" + std::string(name) +
                              "' (expected chronological or random)");
}

SplitSizes split_sizes(std::size_t n) {
  const std::size_t train = n / 2;
  const std::size_t valid = n / 5;
  return {train, valid, n - train - valid};
}

EvalSplit chronological_split(std::span<const Interaction> interactions, std::size_t num_users,
                              std::size_t num_items) {
  for (const auto& x : interactions) {
    if (!x.timestamp) throw std::invalid_argument("chronological split requires timestamps on every interaction");
  }
  auto groups = by_user(interactions, num_users, num_items);
  std::vector<Triplet> train, valid, test;
  std::vector<std::size_t> ordered;
  for (std::size_t u = 0; u < num_users; ++u) {
    auto& g = groups[u];
    std::stable_sort(g.begin(), g.end(), [](const Interaction& a, const Interaction& b) {
      return *a.timestamp != *b.timestamp ? *a.timestamp < *b.timestamp : a.item < b.item;
    });
    ordered.clear();
    std::unordered_set<std::size_t> seen;
    for (const auto& x : g)
      if (seen.insert(x.item).second) ordered.push_back(x.item);
    cut(u, ordered, train, valid, test);
  }
  return assemble(num_users, num_items, std::move(train), std::move(valid), std::move(test),
                  SplitMode::kChronological);
}

EvalSplit random_split(std::span<const Interaction> interactions, std::size_t num_users,
                       std::size_t num_items, std::uint64_t seed) {
  auto groups = by_user(interactions, num_users, num_items);
  std::mt19937_64 rng(seed);
  std::vector<Triplet> train, valid, test;
  std::vector<std::size_t> ordered;
  for (std::size_t u = 0; u < num_users; ++u) {
    ordered.clear();
    for (const auto& x : groups[u]) ordered.push_back(x.item);
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
    std::shuffle(ordered.begin(), ordered.end(), rng);
    cut(u, ordered, train, valid, test);
  }
  return assemble(num_users, num_items, std::move(train), std::move(valid), std::move(test),
                  SplitMode::kRandom);
}

}  // namespace ncerec::eval
