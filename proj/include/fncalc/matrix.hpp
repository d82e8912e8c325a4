#pragma once

#include <vector>

#include "fncalc/scalar.hpp"

namespace fncalc {

/// Dense square or rectangular matrix over the rational-function field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Scalar& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  bool is_zero() const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  friend Matrix operator*(const Scalar& f, const Matrix& m);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

Scalar determinant(const Matrix& m);
/// Inverse over the function field; throws NotInvertible when det is 0.
Matrix inverse(const Matrix& m);
/// Reduced row echelon form; `pivots` receives pivot columns.
Matrix row_reduce(const Matrix& m, std::vector<int>* pivots = nullptr);
/// Rank over the rational-function field (generic rank).
int rank(const Matrix& m);
/// Basis of the right null space, one column vector per entry.
std::vector<std::vector<Scalar>> kernel(const Matrix& m);

}  // namespace fncalc
