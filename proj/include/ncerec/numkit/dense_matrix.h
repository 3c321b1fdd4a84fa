#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ncerec::numkit {

// Row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Takes ownership of row-major `values`; throws ShapeError on a size
  // mismatch and std::invalid_argument on non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  DenseMatrix transposed() const;
  // Copy of column `c` as a contiguous vector.
  std::vector<double> column(std::size_t c) const;
  bool all_finite() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

double frobenius_norm(const DenseMatrix& m);
// max_{i,j} |a(i,j) - b(i,j)|; throws ShapeError when shapes differ.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace ncerec::numkit
