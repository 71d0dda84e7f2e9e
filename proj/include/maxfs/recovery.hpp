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

#ifndef MAXFS_RECOVERY_HPP_
#define MAXFS_RECOVERY_HPP_

#include <vector>

#include "maxfs/metrics.hpp"
#include "maxfs/numcore.hpp"

namespace maxfs {

struct RecoveryStats {
  Index lp_solves = 0;
  /// Outer iterations for MAX FS methods, greedy steps for pursuits,
  /// reweighting rounds for IRWLS.
  Index iterations = 0;
  Index simplex_pivots = 0;
  /// Method M only: Method B ran because basis pursuit was judged to fail.
  bool used_fallback = false;
  /// PFP only: no admissible face remained while the residual was nonzero.
  bool stalled = false;
  /// MAX FS methods: objective of the admitted candidate, per outer step.
  std::vector<double> z_trace;
  /// Pursuits and IRWLS: ||phi x_t - y||_2 after each iteration.
  std::vector<double> residual_trace;
};

struct RecoveryResult {
  RealVector x;
  /// {j : |x_j| > nonzero_tol}, ascending.
  IndexSet support;
  Index t_sparsity = 0;
  /// ||phi x - y||_2
  double residual_norm = 0.0;
  RecoveryStats stats;
};

/// Fills support, t_sparsity and residual_norm from x.
RecoveryResult finalize_result(const DenseMatrix& phi, const RealVector& y,
                               RealVector x, double nonzero_tol,
                               RecoveryStats stats);

/// {j : |x_j| > tol}, ascending.
IndexSet support_of(const RealVector& x, double tol);

/// Throws DimensionError unless phi is m x n with y of length m, and rejects
/// non-finite data.
void check_problem(const DenseMatrix& phi, const RealVector& y,
                   const char* who);

}  // namespace maxfs

#endif  // MAXFS_RECOVERY_HPP_
