#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ncerec::numkit {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

struct SparseRowView {
  std::span<const std::size_t> cols;
  std::span<const double> values;
  std::size_t size() const { return cols.size(); }
};

struct SparseColView {
  std::span<const std::size_t> rows;
  std::span<const double> values;
  std::size_t size() const { return rows.size(); }
};

enum class Duplicates {
  kReject,     // duplicate (row, col) throws std::invalid_argument
  kKeepFirst,  // first occurrence in input order wins
};

// Immutable compressed-row matrix with a column-major view built alongside.
// Within each row column indices are strictly ascending (and vice versa for
// the column view).
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets,
                                    Duplicates duplicates = Duplicates::kReject);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  SparseRowView row(std::size_t r) const;
  SparseColView col(std::size_t c) const;

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const std::size_t> row_idx() const { return row_idx_; }
  std::span<const double> col_values() const { return col_values_; }

  std::size_t row_nnz(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }
  std::size_t col_nnz(std::size_t c) const { return col_ptr_[c + 1] - col_ptr_[c]; }
  std::vector<std::size_t> row_counts() const;
  std::vector<std::size_t> col_counts() const;

  // Value at (r, c), 0 if absent. O(log nnz(row)).
  double at(std::size_t r, std::size_t c) const;
  bool contains(std::size_t r, std::size_t c) const;

  std::vector<Triplet> to_triplets() const;

  bool operator==(const SparseMatrix& other) const;

 private:
  void build_column_view();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> col_values_;
};

// Element-wise union of matrices with identical shape; entries present in
// several inputs keep the value from the first one. Used to merge splits.
SparseMatrix merge(std::span<const SparseMatrix* const> parts);

}  // namespace ncerec::numkit
