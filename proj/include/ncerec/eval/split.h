#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::eval {

// One rating event in dense index space.
struct Interaction {
  std::size_t user = 0;
  std::size_t item = 0;
  double rating = 1.0;
  std::optional<std::int64_t> timestamp;
};

// Keeps events with rating strictly above `threshold`.
std::vector<Interaction> binarize(std::span<const Interaction> ratings, double threshold);

enum class SplitMode { kChronological, kRandom };

std::string_view to_string(SplitMode mode);
SplitMode parse_split_mode(std::string_view name);

// Per-user cut sizes for n interactions: floor(n/2) train, floor(n/5)
// validation, the remainder test.
struct SplitSizes {
  std::size_t train;
  std::size_t valid;
  std::size_t test;
};
SplitSizes split_sizes(std::size_t n);

// Three binary matrices over the same user/item index space.
struct EvalSplit {
  numkit::SparseMatrix train;
  numkit::SparseMatrix valid;
  numkit::SparseMatrix test;
  SplitMode mode = SplitMode::kChronological;
};

// Per user, orders interactions by (timestamp, item) and cuts 50/20/30.
// Repeated (user, item) pairs keep their earliest occurrence. Throws
// std::invalid_argument if any interaction lacks a timestamp.
EvalSplit chronological_split(std::span<const Interaction> interactions, std::size_t num_users,
                              std::size_t num_items);

// Per user, shuffles the distinct items with a generator seeded by `seed`
// (users visited in index order) and cuts 50/20/30.
EvalSplit random_split(std::span<const Interaction> interactions, std::size_t num_users,
                       std::size_t num_items, std::uint64_t seed);

}  // namespace ncerec::eval
