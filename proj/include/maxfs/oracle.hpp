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

#ifndef MAXFS_ORACLE_HPP_
#define MAXFS_ORACLE_HPP_

#include <stdexcept>

#include "maxfs/numcore.hpp"

namespace maxfs::oracle {

inline constexpr Index kMaxColumns = 20;
inline constexpr Index kMaxCardinality = 6;

/// Thrown when no support within the cardinality cap solves the system.
class ExceedsCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Index min_cardinality = 0;
  /// Lexicographically smallest feasible support of minimum cardinality.
  IndexSet witness_support;
  /// Full-length solution supported on witness_support.
  RealVector witness_x;
  /// True iff exactly one support of that cardinality is feasible.
  bool unique = true;
};

/// Least-squares residual test ||phi_S x - y||inf <= 1e-9 (1 + ||y||inf).
/// On success writes the coefficients into x (full length).
bool support_feasible(const DenseMatrix& phi, const RealVector& y,
                      const IndexSet& support, RealVector* x = nullptr);

/// Exhaustive minimum-support search: enumerates supports by increasing
/// cardinality, lexicographically within a cardinality. Requires
/// phi.cols() <= kMaxColumns and max_card <= kMaxCardinality.
OracleResult min_support_exact(const DenseMatrix& phi, const RealVector& y,
                               Index max_card);

}  // namespace maxfs::oracle

#endif  // MAXFS_ORACLE_HPP_
