#include "specgnn/dense_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specgnn {

namespace {

[[noreturn]] void shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch, " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: entry count " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (!same_shape(other)) shape_error("operator+=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (!same_shape(other)) shape_error("operator-=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double scale) {
  for (double& x : data_) x *= scale;
  return *this;
}

void DenseMatrix::add_scaled(const DenseMatrix& other, double scale) {
  if (!same_shape(other)) shape_error("add_scaled", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
  a += b;
  return a;
}

DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
  a -= b;
  return a;
}

DenseMatrix operator*(double scale, DenseMatrix a) {
  a *= scale;
  return a;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), k_dim = a.cols(), m = b.cols();
  // i-k-j order: streams over rows of b, vectorizes the inner loop.
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.data() + i * m;
    const double* ai = a.data() + i * k_dim;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.data() + k * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double x : a.entries()) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const DenseMatrix& a) {
  for (double x : a.entries())
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> v) {
  return std::sqrt(dot(v, v));
}

double linf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace specgnn
