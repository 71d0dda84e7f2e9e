// Copyright 2026 The maxfs-cs Authors
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

#ifndef MAXFS_NUMCORE_HPP_
#define MAXFS_NUMCORE_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxfs {

using RealVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Ordered set of column indices, always kept sorted ascending.
using IndexSet = std::vector<Index>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(Index deficient, Index cols);
  Index deficient_columns() const { return deficient_; }

 private:
  Index deficient_;
};

/// Relative pivot threshold below which a column counts as dependent.
inline constexpr double kRankTolerance = 1e-10;

RealVector mat_vec(const DenseMatrix& a, const RealVector& v);

/// Minimizes ||a x - b||_2 through a column-pivoted QR factorization.
/// Throws RankDeficientError when a pivot falls below kRankTolerance times
/// the largest pivot.
RealVector least_squares(const DenseMatrix& a, const RealVector& b);

/// Moore-Penrose pseudo-inverse; handles rank-deficient input.
DenseMatrix pseudo_inverse(const DenseMatrix& a);

/// Copies the listed columns of `a` in order.
DenseMatrix select_columns(const DenseMatrix& a, std::span<const Index> cols);

bool all_finite(const RealVector& v);
bool all_finite(const DenseMatrix& a);

/// Throws std::invalid_argument naming `what` if any entry is NaN or Inf.
void require_finite(const RealVector& v, const std::string& what);
void require_finite(const DenseMatrix& a, const std::string& what);

}  // namespace maxfs

#endif  // MAXFS_NUMCORE_HPP_
