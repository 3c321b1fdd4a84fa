#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ncerec/dataio/ratings.h"
#include "ncerec/eval/split.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::dataio {

// MatrixMarket coordinate format. Binary matrices (all values 1) are
// written as "pattern"; anything else as "real" with 17 significant digits.
void write_matrix_market(std::ostream& out, const numkit::SparseMatrix& m);
numkit::SparseMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
void save_matrix(const numkit::SparseMatrix& m, const std::string& path);
numkit::SparseMatrix load_matrix(const std::string& path);

// One id per line.
void save_ids(const std::vector<std::string>& ids, const std::string& path);
std::vector<std::string> load_ids(const std::string& path);

// A prepared split directory:
//   train.mtx valid.mtx test.mtx   the three binary matrices
//   users.tsv items.tsv            external ids, line i = index i
//   split.json                     mode, threshold, seed
struct SplitBundle {
  eval::EvalSplit split;
  IndexMaps maps;
  double threshold = 0.0;
  std::uint64_t seed = 0;
};

void save_split(const SplitBundle& bundle, const std::string& directory);
SplitBundle load_split(const std::string& directory);

}  // namespace ncerec::dataio
