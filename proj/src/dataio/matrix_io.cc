#include "ncerec/dataio/matrix_io.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ncerec/errors.h"

namespace ncerec::dataio {

namespace fs = std::filesystem;

void write_matrix_market(std::ostream& out, const numkit::SparseMatrix& m) {
  bool pattern = true;
  for (double v : m.values())
    if (v != 1.0) pattern = false;
  out << "%%MatrixMarket matrix coordinate " << (pattern ? "pattern" : "real") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const auto& ptr = m.row_ptr();
  const auto& idx = m.col_idx();
  const auto& val = m.values();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t p = ptr[r]; p < ptr[r + 1]; ++p) {
      out << r + 1 << ' ' << idx[p] + 1;
      if (!pattern) out << ' ' << val[p];
      out << '\n';
    }
  }
}

numkit::SparseMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw FormatError(source, 1, "empty file");
  ++number;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
    throw FormatError(source, number, "not a MatrixMarket coordinate matrix");
  if (field != "pattern" && field != "real" && field != "integer")
    throw FormatError(source, number, "unsupported field '" + field + "'");
  if (symmetry != "general") throw FormatError(source, number, "only general matrices supported");
  const bool pattern = field == "pattern";

  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  std::vector<numkit::Triplet> triplets;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream fields(line);
    if (!have_size) {
      if (!(fields >> rows >> cols >> nnz)) throw FormatError(source, number, "bad size line");
      have_size = true;
      triplets.reserve(nnz);
      continue;
    }
    std::size_t r = 0, c = 0;
    double v = 1.0;
    if (!(fields >> r >> c) || (!pattern && !(fields >> v)))
      throw FormatError(source, number, "bad entry");
    if (r == 0 || c == 0 || r > rows || c > cols)
      throw FormatError(source, number, "index out of range");
    triplets.push_back({r - 1, c - 1, v});
  }
  if (!have_size) throw FormatError(source, number, "missing size line");
  if (triplets.size() != nnz)
    throw FormatError(source, number,
                      "expected " + std::to_string(nnz) + " entries, found " +
                          std::to_string(triplets.size()));
  try {
    return numkit::SparseMatrix::from_triplets(rows, cols, triplets);
  } catch (const std::invalid_argument& e) {
    throw FormatError(source, number, e.what());
  }
}

void save_matrix(const numkit::SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_matrix_market(out, m);
  if (!out.flush()) throw IoError("write failed: " + path);
}

numkit::SparseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_market(in, path);
}

void save_ids(const std::vector<std::string>& ids, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& id : ids) out << id << '\n';
  if (!out.flush()) throw IoError("write failed: " + path);
}

std::vector<std::string> load_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ids.push_back(line);
  }
  return ids;
}

void save_split(const SplitBundle& bundle, const std::string& directory) {
  fs::create_directories(directory);
  const fs::path dir(directory);
  save_matrix(bundle.split.train, (dir / "train.mtx").string());
  save_matrix(bundle.split.valid, (dir / "valid.mtx").string());
  save_matrix(bundle.split.test, (dir / "test.mtx").string());
  save_ids(bundle.maps.user_ids(), (dir / "users.tsv").string());
  save_ids(bundle.maps.item_ids(), (dir / "items.tsv").string());
  nlohmann::json meta;
  meta["mode"] = std::string(eval::to_string(bundle.split.mode));
  meta["threshold"] = bundle.threshold;
  meta["seed"] = bundle.seed;
  std::ofstream out(dir / "split.json");
  if (!out) throw IoError("cannot write " + (dir / "split.json").string());
  out << meta.dump(2) << '\n';
}

SplitBundle load_split(const std::string& directory) {
  const fs::path dir(directory);
  SplitBundle bundle;
  bundle.split.train = load_matrix((dir / "train.mtx").string());
  bundle.split.valid = load_matrix((dir / "valid.mtx").string());
  bundle.split.test = load_matrix((dir / "test.mtx").string());
  bundle.maps = IndexMaps::from_ids(load_ids((dir / "users.tsv").string()),
                                    load_ids((dir / "items.tsv").string()));
  const auto& s = bundle.split;
  if (s.valid.rows() != s.train.rows() || s.test.rows() != s.train.rows() ||
      s.valid.cols() != s.train.cols() || s.test.cols() != s.train.cols() ||
      bundle.maps.users() != s.train.rows() || bundle.maps.items() != s.train.cols())
    throw FormatError("split " + directory + ": matrices and id files disagree on shape");
  std::ifstream in(dir / "split.json");
  if (!in) throw IoError("cannot open " + (dir / "split.json").string());
  try {
    const nlohmann::json meta = nlohmann::json::parse(in);
    bundle.split.mode = eval::parse_split_mode(meta.at("mode").get<std::string>());
    bundle.threshold = meta.at("threshold").get<double>();
    bundle.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("split.json: " + std::string(e.what()));
  }
  return bundle;
}

}  // namespace ncerec::dataio
