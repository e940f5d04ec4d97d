#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "higan/errors.hpp"

namespace higan {

/// Dense row-major matrix of doubles; the single layout used throughout.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* begin() { return data_.data(); }
  double* end() { return data_.data() + data_.size(); }
  const double* begin() const { return data_.data(); }
  const double* end() const { return data_.data() + data_.size(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double s);
void add_scaled(Matrix& accum, const Matrix& m, double s);  // accum += s * m
double frobenius_norm(const Matrix& m);

/// Sample covariance with the n-1 denominator: rows are observations,
/// columns are features. Computed by explicit mean-centering, which keeps
/// the result well conditioned; the output is bitwise symmetric.
Matrix covariance(const Matrix& x);

std::vector<double> column_means(const Matrix& m);
Matrix hconcat(const Matrix& left, const Matrix& right);
Matrix column_slice(const Matrix& m, std::size_t begin, std::size_t end);
Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows);

/// Throws NonFiniteValue naming `what` if any entry is NaN or infinite.
void ensure_finite(const Matrix& m, const std::string& what);

}  // namespace higan
