#include "higan/matrix.hpp"

#include <cmath>
#include <string>

namespace higan {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = n == 0 ? 0 : rows.begin()->size();
  Matrix m(n, d);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != d) throw ShapeMismatch("ragged initializer rows");
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw ShapeMismatch("matmul: " + shape_str(a) + " times " + shape_str(b));
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.data() + i * a.cols();
    double* orow = out.data() + i * out.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = arow[k];
      const double* brow = b.data() + k * b.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw ShapeMismatch("matmul_nt: " + shape_str(a) + " times " + shape_str(b) + "^T");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.data() + i * a.cols();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.data() + j * b.cols();
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) sum += arow[k] * brow[k];
      out(i, j) = sum;
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw ShapeMismatch("matmul_tn: " + shape_str(a) + "^T times " + shape_str(b));
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* arow = a.data() + k * a.cols();
    const double* brow = b.data() + k * b.cols();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      double* orow = out.data() + i * out.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw ShapeMismatch("add: " + shape_str(a) + " vs " + shape_str(b));
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw ShapeMismatch("sub: " + shape_str(a) + " vs " + shape_str(b));
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Matrix scale(const Matrix& m, double s) {
  Matrix out = m;
  for (double& v : out) v *= s;
  return out;
}

void add_scaled(Matrix& accum, const Matrix& m, double s) {
  if (!accum.same_shape(m))
    throw ShapeMismatch("add_scaled: " + shape_str(accum) + " vs " + shape_str(m));
  for (std::size_t i = 0; i < accum.size(); ++i) accum.data()[i] += s * m.data()[i];
}

double frobenius_norm(const Matrix& m) {
  double sum = 0.0;
  for (double v : m) sum += v * v;
  return std::sqrt(sum);
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> means(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) means[c] += m(r, c);
  if (m.rows() > 0)
    for (double& v : means) v /= static_cast<double>(m.rows());
  return means;
}

Matrix covariance(const Matrix& x) {
  if (x.rows() < 2)
    throw DegenerateSample("covariance needs at least 2 rows, got " +
                           std::to_string(x.rows()));
  const std::size_t n = x.rows();
  const std::vector<double> means = column_means(x);
  Matrix centered(n, x.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) centered(r, c) = x(r, c) - means[c];
  Matrix cov = matmul_tn(centered, centered);
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (double& v : cov) v *= inv;
  return cov;
}

Matrix hconcat(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows())
    throw ShapeMismatch("hconcat: " + shape_str(left) + " vs " + shape_str(right));
  Matrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < left.cols(); ++c) out(r, c) = left(r, c);
    for (std::size_t c = 0; c < right.cols(); ++c) out(r, left.cols() + c) = right(r, c);
  }
  return out;
}

Matrix column_slice(const Matrix& m, std::size_t begin, std::size_t end) {
  if (begin > end || end > m.cols())
    throw ShapeMismatch("column_slice: [" + std::to_string(begin) + ", " +
                        std::to_string(end) + ") of " + shape_str(m));
  Matrix out(m.rows(), end - begin);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = m(r, c);
  return out;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows())
      throw ShapeMismatch("gather_rows: row " + std::to_string(rows[i]) +
                          " out of range for " + shape_str(m));
    for (std::size_t c = 0; c < m.cols(); ++c) out(i, c) = m(rows[i], c);
  }
  return out;
}

void ensure_finite(const Matrix& m, const std::string& what) {
  for (double v : m)
    if (!std::isfinite(v)) throw NonFiniteValue(what + " contains a non-finite value");
}

}  // namespace higan
