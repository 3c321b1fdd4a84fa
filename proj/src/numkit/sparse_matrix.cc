#include "ncerec/numkit/sparse_matrix.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ncerec/errors.h"

namespace ncerec::numkit {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0), col_ptr_(cols + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets, Duplicates duplicates) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw ShapeError("SparseMatrix: entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }
  // Stable so that kKeepFirst sees input order within equal keys.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::vector<std::size_t> counts(rows, 0);
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (i > 0 && triplets[i - 1].row == t.row && triplets[i - 1].col == t.col) {
      if (duplicates == Duplicates::kReject) {
        throw std::invalid_argument("SparseMatrix: duplicate entry (" + std::to_string(t.row) +
                                    ", " + std::to_string(t.col) + ")");
      }
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++counts[t.row];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] = m.row_ptr_[r] + counts[r];
  m.build_column_view();
  return m;
}

void SparseMatrix::build_column_view() {
  col_ptr_.assign(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++col_ptr_[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) col_ptr_[c + 1] += col_ptr_[c];
  row_idx_.resize(col_idx_.size());
  col_values_.resize(col_idx_.size());
  std::vector<std::size_t> next(col_ptr_.begin(), col_ptr_.end() - 1);
  // Rows are visited in ascending order, so each column comes out sorted.
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t dst = next[col_idx_[p]]++;
      row_idx_[dst] = r;
      col_values_[dst] = values_[p];
    }
  }
}

SparseRowView SparseMatrix::row(std::size_t r) const {
  const std::size_t b = row_ptr_[r];
  const std::size_t n = row_ptr_[r + 1] - b;
  return {std::span<const std::size_t>(col_idx_).subspan(b, n),
          std::span<const double>(values_).subspan(b, n)};
}

SparseColView SparseMatrix::col(std::size_t c) const {
  const std::size_t b = col_ptr_[c];
  const std::size_t n = col_ptr_[c + 1] - b;
  return {std::span<const std::size_t>(row_idx_).subspan(b, n),
          std::span<const double>(col_values_).subspan(b, n)};
}

std::vector<std::size_t> SparseMatrix::row_counts() const {
  std::vector<std::size_t> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = row_nnz(r);
  return out;
}

std::vector<std::size_t> SparseMatrix::col_counts() const {
  std::vector<std::size_t> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = col_nnz(c);
  return out;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto view = row(r);
  auto it = std::lower_bound(view.cols.begin(), view.cols.end(), c);
  if (it == view.cols.end() || *it != c) return 0.0;
  return view.values[static_cast<std::size_t>(it - view.cols.begin())];
}

bool SparseMatrix::contains(std::size_t r, std::size_t c) const {
  auto view = row(r);
  return std::binary_search(view.cols.begin(), view.cols.end(), c);
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      out.push_back({r, col_idx_[p], values_[p]});
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_ && values_ == other.values_;
}

SparseMatrix merge(std::span<const SparseMatrix* const> parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front()->rows();
  const std::size_t cols = parts.front()->cols();
  std::vector<Triplet> all;
  for (const SparseMatrix* p : parts) {
    if (p->rows() != rows || p->cols() != cols) throw ShapeError("merge: shape mismatch");
    auto t = p->to_triplets();
    all.insert(all.end(), t.begin(), t.end());
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(all), Duplicates::kKeepFirst);
}

}  // namespace ncerec::numkit
