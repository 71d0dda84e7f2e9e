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

#include "maxfs/numcore.hpp"

#include <cmath>

namespace maxfs {

RankDeficientError::RankDeficientError(Index deficient, Index cols)
    : std::runtime_error("least_squares: matrix is rank deficient (" +
                         std::to_string(deficient) + " of " +
                         std::to_string(cols) + " columns dependent)"),
      deficient_(deficient) {}

RealVector mat_vec(const DenseMatrix& a, const RealVector& v) {
  if (a.cols() != v.size()) {
    throw DimensionError("mat_vec: matrix has " + std::to_string(a.cols()) +
                         " columns but vector has length " +
                         std::to_string(v.size()));
  }
  return a * v;
}

RealVector least_squares(const DenseMatrix& a, const RealVector& b) {
  if (a.rows() != b.size()) {
    throw DimensionError("least_squares: row count " +
                         std::to_string(a.rows()) + " != rhs length " +
                         std::to_string(b.size()));
  }
  if (a.rows() < a.cols()) {
    throw DimensionError("least_squares: underdetermined system (" +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ")");
  }
  if (a.cols() == 0) return RealVector(0);

  Eigen::ColPivHouseholderQR<DenseMatrix> qr(a);
  qr.setThreshold(kRankTolerance);
  // Eigen's threshold compares against the largest pivot, matching the
  // relative rule above.
  const Index rank = qr.rank();
  if (rank < a.cols()) throw RankDeficientError(a.cols() - rank, a.cols());
  return qr.solve(b);
}

DenseMatrix pseudo_inverse(const DenseMatrix& a) {
  if (a.size() == 0) throw DimensionError("pseudo_inverse: empty matrix");
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(a);
  cod.setThreshold(kRankTolerance);
  return cod.pseudoInverse();
}

DenseMatrix select_columns(const DenseMatrix& a, std::span<const Index> cols) {
  DenseMatrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0 || cols[k] >= a.cols()) {
      throw DimensionError("select_columns: column " +
                           std::to_string(cols[k]) + " out of range");
    }
    out.col(static_cast<Index>(k)) = a.col(cols[k]);
  }
  return out;
}

bool all_finite(const RealVector& v) { return v.allFinite(); }
bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

void require_finite(const RealVector& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

void require_finite(const DenseMatrix& a, const std::string& what) {
  if (!a.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

}  // namespace maxfs
