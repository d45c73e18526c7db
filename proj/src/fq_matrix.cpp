// Copyright 2026 The qpir-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpir/fq_matrix.hpp"

#include "qpir/error.hpp"

namespace qpir {

FqMatrix::FqMatrix(TowerPtr tower, int rows, int cols)
    : tower_(std::move(tower)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw PreconditionError("negative matrix shape");
  data_.assign(std::size_t(rows) * cols, tower_->zero());
}

FqMatrix FqMatrix::identity(TowerPtr tower, int n) {
  FqMatrix m(tower, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = tower->one();
  return m;
}

FqMatrix FqMatrix::from_columns(TowerPtr tower, int rows,
                                const std::vector<std::vector<FieldElem>>& cols) {
  FqMatrix m(tower, rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols_; ++j) {
    if (static_cast<int>(cols[j].size()) != rows)
      throw MismatchError("column has wrong length");
    for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

std::vector<FieldElem> FqMatrix::column(int j) const {
  std::vector<FieldElem> c;
  c.reserve(rows_);
  for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
  return c;
}

std::vector<FieldElem> FqMatrix::row(int i) const {
  return {data_.begin() + std::size_t(i) * cols_,
          data_.begin() + std::size_t(i + 1) * cols_};
}

FqMatrix FqMatrix::submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const {
  FqMatrix m(tower_, static_cast<int>(rs.size()), static_cast<int>(cs.size()));
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (rs[i] < 0 || rs[i] >= rows_ || cs[j] < 0 || cs[j] >= cols_)
        throw PreconditionError("submatrix index out of range");
      m(int(i), int(j)) = (*this)(rs[i], cs[j]);
    }
  return m;
}

FqMatrix FqMatrix::transpose() const {
  FqMatrix m(tower_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

FqMatrix FqMatrix::operator*(const FqMatrix& o) const {
  if (cols_ != o.rows_) throw MismatchError("matrix product shape mismatch");
  FqMatrix m(tower_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const auto& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += a * o(k, j);
    }
  return m;
}

std::vector<FieldElem> FqMatrix::operator*(const std::vector<FieldElem>& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw MismatchError("matrix-vector shape mismatch");
  std::vector<FieldElem> y(rows_, tower_->zero());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (!x[j].is_zero() && !(*this)(i, j).is_zero()) y[i] += (*this)(i, j) * x[j];
  return y;
}

FqMatrix FqMatrix::operator+(const FqMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw MismatchError("matrix sum shape mismatch");
  FqMatrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] += o.data_[i];
  return m;
}

FqMatrix FqMatrix::operator-(const FqMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw MismatchError("matrix sum shape mismatch");
  FqMatrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] -= o.data_[i];
  return m;
}

bool FqMatrix::operator==(const FqMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool FqMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<int> FqMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int piv = -1;
    for (int i = r; i < rows_; ++i)
      if (!(*this)(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols_; ++j) std::swap((*this)(piv, j), (*this)(r, j));
    const FieldElem inv = (*this)(r, c).inv();
    for (int j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || (*this)(i, c).is_zero()) continue;
      const FieldElem f = (*this)(i, c);
      for (int j = c; j < cols_; ++j)
        if (!(*this)(r, j).is_zero()) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int FqMatrix::rank() const {
  FqMatrix m = *this;
  return static_cast<int>(m.rref().size());
}

FqMatrix FqMatrix::inverse() const {
  if (rows_ != cols_) throw PreconditionError("inverse of a non-square matrix");
  const int n = rows_;
  FqMatrix aug(tower_, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = tower_->one();
  }
  const auto piv = aug.rref();
  if (static_cast<int>(piv.size()) < n || (n > 0 && piv[n - 1] != n - 1))
    throw PreconditionError("matrix is singular");
  FqMatrix inv(tower_, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::optional<std::vector<FieldElem>> FqMatrix::solve(const std::vector<FieldElem>& b) const {
  if (static_cast<int>(b.size()) != rows_) throw MismatchError("rhs has wrong length");
  FqMatrix aug(tower_, rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  const auto piv = aug.rref();
  std::vector<FieldElem> x(cols_, tower_->zero());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == cols_) return std::nullopt;
    x[piv[r]] = aug(int(r), cols_);
  }
  return x;
}

std::vector<std::vector<FieldElem>> FqMatrix::kernel() const {
  FqMatrix m = *this;
  const auto piv = m.rref();
  std::vector<bool> is_piv(cols_, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<FieldElem>> basis;
  for (int f = 0; f < cols_; ++f) {
    if (is_piv[f]) continue;
    std::vector<FieldElem> x(cols_, tower_->zero());
    x[f] = tower_->one();
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m(int(r), f);
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace qpir
