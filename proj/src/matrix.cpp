#include "fncalc/matrix.hpp"

#include <utility>

#include "fncalc/error.hpp"

namespace fncalc {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& s : data_)
    if (!s.is_zero()) return false;
  return true;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DegreeMismatch("matrix shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + Scalar(-1) * o; }

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DegreeMismatch("matrix shape mismatch");
  Matrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) r(i, j) += a * o(k, j);
    }
  return r;
}

Matrix operator*(const Scalar& f, const Matrix& m) {
  Matrix r = m;
  for (auto& s : r.data_) s = f * s;
  return r;
}

namespace {

// Gaussian elimination preferring the simplest available pivot.
int choose_pivot(const Matrix& m, int col, int from) {
  int best = -1;
  std::size_t best_size = 0;
  for (int r = from; r < m.rows(); ++r) {
    const Scalar& s = m(r, col);
    if (s.is_zero()) continue;
    const std::size_t size = s.num().terms().size() + s.den().terms().size() + (s.is_constant() ? 0 : 4);
    if (best < 0 || size < best_size) {
      best = r;
      best_size = size;
    }
  }
  return best;
}

void swap_rows(Matrix& m, int a, int b) {
  if (a == b) return;
  for (int c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace

Scalar determinant(const Matrix& in) {
  if (in.rows() != in.cols()) throw DegreeMismatch("determinant of a non-square matrix");
  Matrix m = in;
  const int n = m.rows();
  Scalar det(1);
  for (int col = 0; col < n; ++col) {
    const int p = choose_pivot(m, col, col);
    if (p < 0) return Scalar();
    if (p != col) {
      swap_rows(m, p, col);
      det = -det;
    }
    const Scalar pivot = m(col, col);
    det *= pivot;
    for (int r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      const Scalar factor = m(r, col) / pivot;
      for (int c = col; c < n; ++c)
        if (!m(col, c).is_zero()) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

Matrix inverse(const Matrix& in) {
  if (in.rows() != in.cols()) throw DegreeMismatch("inverse of a non-square matrix");
  const int n = in.rows();
  Matrix aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug(r, c) = in(r, c);
    aug(r, n + r) = Scalar(1);
  }
  std::vector<int> pivots;
  const Matrix red = row_reduce(aug, &pivots);
  if (static_cast<int>(pivots.size()) < n || pivots[static_cast<std::size_t>(n - 1)] >= n) throw NotInvertible();
  Matrix out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = red(r, n + c);
  return out;
}

Matrix row_reduce(const Matrix& in, std::vector<int>* pivots) {
  Matrix m = in;
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    const int p = choose_pivot(m, col, row);
    if (p < 0) continue;
    swap_rows(m, p, row);
    const Scalar inv = m(row, col).inverse();
    for (int c = col; c < m.cols(); ++c)
      if (!m(row, c).is_zero()) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Scalar factor = m(r, col);
      for (int c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) -= factor * m(row, c);
    }
    piv.push_back(col);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

int rank(const Matrix& m) {
  std::vector<int> pivots;
  row_reduce(m, &pivots);
  return static_cast<int>(pivots.size());
}

std::vector<std::vector<Scalar>> kernel(const Matrix& m) {
  std::vector<int> pivots;
  const Matrix red = row_reduce(m, &pivots);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Scalar> v(static_cast<std::size_t>(m.cols()));
    v[static_cast<std::size_t>(free)] = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = -red(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace fncalc
