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

#pragma once

#include <optional>
#include <vector>

#include "qpir/field.hpp"

namespace qpir {

/// Dense row-major matrix over F_q.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(TowerPtr tower, int rows, int cols);
  static FqMatrix identity(TowerPtr tower, int n);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static FqMatrix from_columns(TowerPtr tower, int rows,
                               const std::vector<std::vector<FieldElem>>& cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const TowerPtr& tower() const noexcept { return tower_; }

  FieldElem& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const FieldElem& operator()(int i, int j) const {
    return data_[std::size_t(i) * cols_ + j];
  }

  std::vector<FieldElem> column(int j) const;
  std::vector<FieldElem> row(int i) const;
  FqMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;
  FqMatrix transpose() const;

  FqMatrix operator*(const FqMatrix& o) const;
  std::vector<FieldElem> operator*(const std::vector<FieldElem>& x) const;
  FqMatrix operator+(const FqMatrix& o) const;
  FqMatrix operator-(const FqMatrix& o) const;
  bool operator==(const FqMatrix& o) const;
  bool is_zero() const;

  int rank() const;
  /// Throws PreconditionError when singular or not square.
  FqMatrix inverse() const;
  /// A solution of this * x = b, if one exists.
  std::optional<std::vector<FieldElem>> solve(const std::vector<FieldElem>& b) const;
  /// Basis of the right null space {x : this * x = 0}.
  std::vector<std::vector<FieldElem>> kernel() const;

 private:
  // Reduced row echelon form in place; returns pivot columns.
  std::vector<int> rref();

  TowerPtr tower_;
  int rows_ = 0, cols_ = 0;
  std::vector<FieldElem> data_;
};

}  // namespace qpir
