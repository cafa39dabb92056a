// Copyright 2026 The cstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "cstomo/linalg.hpp"
#include "cstomo/operators.hpp"

namespace cstomo {

/// The linear map rho -> (Tr(M_1 rho), ..., Tr(M_m rho)) over Hermitian
/// matrices with the Frobenius inner product, and its adjoint
/// v -> sum_i v_i M_i.
///
/// Operators are stored by structure: computational projectors as a
/// diagonal index, theta patterns as columns of one rank-1 factor matrix,
/// everything else densely. Row i of the map is `ops[i]`.
class MeasurementMap {
 public:
  explicit MeasurementMap(const std::vector<OperatorDescriptor>& ops);

  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return size_; }

  RealVector apply(const Matrix& rho) const;
  Matrix adjoint(const RealVector& v) const;

  /// G(i, j) = Tr(M_i M_j), i.e. the matrix of apply(adjoint(.)).
  Eigen::MatrixXd gram() const;

 private:
  Eigen::Index dim_ = 0;
  Eigen::Index size_ = 0;

  std::vector<Eigen::Index> diag_rows_;  // row in the map
  std::vector<Eigen::Index> diag_index_;  // basis index k of |k><k|

  std::vector<Eigen::Index> factor_rows_;
  Matrix factors_;  // dim x (#rank-1), column j is z for row factor_rows_[j]

  std::vector<Eigen::Index> dense_rows_;
  std::vector<Matrix> dense_;
};

}  // namespace cstomo
