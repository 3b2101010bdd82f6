#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "condlab/errors.hpp"
#include "condlab/rational.hpp"

namespace condlab {

/// Dense row-major matrix. Loops skip zero entries where that matters,
/// since most matrices here (projections, bases) are sparse.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void set_column(std::size_t j, const std::vector<T>& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Returns M v.
  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t j = 0; j < cols_; ++j) {
      if (v[j] == 0) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const T& a = (*this)(i, j);
        if (a != 0) out[i] += a * v[j];
      }
    }
    return out;
  }

  /// Returns M^T w.
  std::vector<T> apply_transpose(const std::vector<T>& w) const {
    if (w.size() != rows_) throw DimensionMismatch("matrix-vector size mismatch");
    std::vector<T> out(cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (w[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& a = (*this)(i, j);
        if (a != 0) out[j] += a * w[i];
      }
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product size mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const T& y = b(k, j);
          if (y != 0) c(i, j) += x * y;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RealMatrix = Matrix<double>;

/// Exact inverse by fraction-free (Bareiss) Gauss-Jordan elimination on the
/// denominator-cleared matrix. Returns nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Exact rank.
std::size_t rank(const RationalMatrix& m);

/// A nonzero vector in the kernel of a square matrix, or nullopt when the
/// matrix is nonsingular.
std::optional<RationalVector> kernel_vector(const RationalMatrix& m);

/// Symmetric positive-semidefiniteness test in exact arithmetic
/// (LDL^T with symmetric pivoting).
bool is_positive_semidefinite(const RationalMatrix& m);

RealMatrix to_real(const RationalMatrix& m);

}  // namespace condlab
