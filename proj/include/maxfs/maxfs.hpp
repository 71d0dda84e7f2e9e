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

#ifndef MAXFS_MAXFS_HPP_
#define MAXFS_MAXFS_HPP_

#include <optional>
#include <stdexcept>

#include "maxfs/recovery.hpp"

namespace maxfs {

/// Parameters of the MAX FS support search.
struct MaxFsConfig {
  /// Candidates examined per list (Method C keeps two lists).
  Index list_length = 7;
  /// Objective weight of admitted support variables in Method B.
  double support_weight = 0.1;
  double nonzero_tol = kNonzeroTol;
  /// Objective values at or below this count as zero.
  double zero_obj_tol = 1e-6;
  /// Support size at which the search gives up; defaults to m.
  std::optional<Index> max_support;

  void validate() const;
};

/// Raised when the support search exceeds max_support.
class NoSparseSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Method B: candidate search on the split-variable LP
///   min sum w_j (u_j + v_j)  s.t.  phi (u - v) = y,  u, v >= 0,
/// where admitted variables keep weight support_weight. Finishes with
/// reduce_support and solve_support_values.
RecoveryResult method_b(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg = {});

/// Method C: candidate search on the elastic LP
///   min sum (e+_j + e-_j)  s.t.  phi x = y,  x + e+ - e- = 0,
/// with x free. Candidates come from the largest nonzero |x_j| and from the
/// zero-valued variables whose zeroing rows carry the largest duals; admitted
/// variables drop out of the objective.
RecoveryResult method_c(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg = {});

/// Method M: basis pursuit, falling back to Method B when the basis pursuit
/// solution has more than m - 3 nonzeros.
RecoveryResult method_m(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg = {});

/// Visits support members in ascending order and drops each one whose
/// removal keeps phi_S x = y feasible (columns outside the support stay at
/// zero). Throws std::runtime_error if the input support is infeasible.
/// Adds the number of LP solves to *lp_solves when given.
IndexSet reduce_support(const DenseMatrix& phi, const RealVector& y,
                        const IndexSet& support, Index* lp_solves = nullptr);

/// Support values from min sum(u + v) s.t. phi_S (u - v) = y. Returns a
/// full-length vector that is zero off the support.
RealVector solve_support_values(const DenseMatrix& phi, const RealVector& y,
                                const IndexSet& support,
                                Index* lp_solves = nullptr);

}  // namespace maxfs

#endif  // MAXFS_MAXFS_HPP_
