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

#include "maxfs/oracle.hpp"

#include <string>

namespace maxfs::oracle {

namespace {

double feasibility_tol(const RealVector& y) {
  const double ynorm = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
  return 1e-9 * (1.0 + ynorm);
}

// Advances `comb` (strictly increasing indices < n) to the next combination
// in lexicographic order; returns false after the last one.
bool next_combination(IndexSet& comb, Index n) {
  const Index k = static_cast<Index>(comb.size());
  for (Index i = k - 1; i >= 0; --i) {
    auto& c = comb[static_cast<std::size_t>(i)];
    if (c < n - k + i) {
      ++c;
      for (Index j = i + 1; j < k; ++j) {
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool support_feasible(const DenseMatrix& phi, const RealVector& y,
                      const IndexSet& support, RealVector* x) {
  const double tol = feasibility_tol(y);
  RealVector coeffs;
  double resid;
  if (support.empty()) {
    resid = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
  } else {
    const DenseMatrix sub = select_columns(phi, support);
    Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(sub);
    coeffs = cod.solve(y);
    resid = (sub * coeffs - y).cwiseAbs().maxCoeff();
  }
  if (resid > tol) return false;
  if (x != nullptr) {
    *x = RealVector::Zero(phi.cols());
    for (std::size_t k = 0; k < support.size(); ++k) {
      (*x)[support[k]] = coeffs[static_cast<Index>(k)];
    }
  }
  return true;
}

OracleResult min_support_exact(const DenseMatrix& phi, const RealVector& y,
                               Index max_card) {
  if (phi.rows() != y.size()) {
    throw DimensionError("min_support_exact: y length does not match rows");
  }
  if (phi.cols() > kMaxColumns || max_card > kMaxCardinality || max_card < 0) {
    throw std::invalid_argument(
        "min_support_exact: guard exceeded (n <= " +
        std::to_string(kMaxColumns) + ", max_card <= " +
        std::to_string(kMaxCardinality) + "; got n = " +
        std::to_string(phi.cols()) + ", max_card = " +
        std::to_string(max_card) + ")");
  }
  const Index n = phi.cols();
  for (Index k = 0; k <= std::min(max_card, n); ++k) {
    IndexSet comb(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    OracleResult result;
    Index feasible_count = 0;
    do {
      RealVector x;
      if (support_feasible(phi, y, comb, &x)) {
        if (feasible_count == 0) {
          result.witness_support = comb;
          result.witness_x = std::move(x);
        }
        ++feasible_count;
      }
    } while (next_combination(comb, n));
    if (feasible_count > 0) {
      result.min_cardinality = k;
      result.unique = feasible_count == 1;
      return result;
    }
  }
  throw ExceedsCapError("min_support_exact: no feasible support within "
                        "cardinality cap " + std::to_string(max_card) +
                        " (exceeds cap)");
}

}  // namespace maxfs::oracle
