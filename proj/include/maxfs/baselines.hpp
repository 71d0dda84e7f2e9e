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

#ifndef MAXFS_BASELINES_HPP_
#define MAXFS_BASELINES_HPP_

#include <optional>

#include "maxfs/recovery.hpp"

namespace maxfs {

/// Stopping rules shared by the greedy pursuits.
struct GreedyStop {
  /// Known input sparsity; caps support growth when set.
  std::optional<Index> max_sparsity;
  double residual_tol = 1e-5;
  /// PFP halts once no column correlates with the residual above this.
  double theta_min = 1e-8;

  void validate() const;
};

/// Regularized reweighting schedule for IRWLS.
struct IrwlsConfig {
  double p = 0.0;
  double eps_initial = 1.0;
  double eps_shrink = 0.1;
  double eps_floor = 1e-8;
  /// eps shrinks once ||x_{t+1} - x_t|| < inner_tol * sqrt(eps).
  double inner_tol = 0.1;
  Index max_outer = 500;

  void validate() const;
};

/// l1 minimization through the split LP min sum(u + v), phi (u - v) = y.
/// Throws std::runtime_error if the system is infeasible.
RecoveryResult basis_pursuit(const DenseMatrix& phi, const RealVector& y,
                             double nonzero_tol = kNonzeroTol);

/// Matching pursuit with per-column normalization in the update. A column may
/// be selected repeatedly; its coefficient accumulates. Stops at
/// ||r|| <= residual_tol, after 100 m steps, or when a new index would grow
/// the support past min(m, max_sparsity).
RecoveryResult matching_pursuit(const DenseMatrix& phi, const RealVector& y,
                                const GreedyStop& stop = {});

/// Orthogonal matching pursuit: least-squares refit on the selected columns
/// after each selection. Throws RankDeficientError if the selected columns
/// lose rank.
RecoveryResult omp(const DenseMatrix& phi, const RealVector& y,
                   const GreedyStop& stop = {});

/// Polytope faces pursuit over the sign-augmented dictionary [phi, -phi].
/// Sets stats.stalled if no admissible face remains before the residual
/// vanishes.
RecoveryResult pfp(const DenseMatrix& phi, const RealVector& y,
                   const GreedyStop& stop = {});

/// Iteratively reweighted least squares with epsilon regularization. Every
/// iterate solves min sum(w_i x_i^2) s.t. phi x = y in closed form.
RecoveryResult irwls(const DenseMatrix& phi, const RealVector& y,
                     const IrwlsConfig& cfg = {});

}  // namespace maxfs

#endif  // MAXFS_BASELINES_HPP_
