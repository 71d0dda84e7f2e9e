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

#ifndef MAXFS_METRICS_HPP_
#define MAXFS_METRICS_HPP_

#include <chrono>
#include <optional>
#include <span>
#include <string>

#include "maxfs/numcore.hpp"

namespace maxfs {

/// Magnitude above which a coefficient counts as nonzero.
inline constexpr double kNonzeroTol = 1e-6;

struct TrialRecord {
  std::string method;
  Index input_s = 0;
  Index recovered_t = 0;
  bool success = false;
  std::optional<double> rse;
  std::chrono::duration<double> runtime{};
  std::optional<Index> lp_solves;
};

/// Number of entries with |x_j| > tol.
Index t_sparsity(const RealVector& x, double tol = kNonzeroTol);

/// Recovery succeeds only when the recovered sparsity equals the input one.
bool is_success(Index t, Index s);

/// (prod values)^(1/len), accumulated in log space. Throws on an empty list
/// or a nonpositive entry.
double geometric_mean(std::span<const double> values);

/// Relative squared error sum((f_hat - f)^2) / sum(f^2).
double rse(const RealVector& f_hat, const RealVector& f);

}  // namespace maxfs

#endif  // MAXFS_METRICS_HPP_
