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

#include "maxfs/recovery.hpp"

#include <cmath>
#include <string>

namespace maxfs {

IndexSet support_of(const RealVector& x, double tol) {
  IndexSet s;
  for (Index j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) > tol) s.push_back(j);
  }
  return s;
}

RecoveryResult finalize_result(const DenseMatrix& phi, const RealVector& y,
                               RealVector x, double nonzero_tol,
                               RecoveryStats stats) {
  RecoveryResult r;
  r.support = support_of(x, nonzero_tol);
  r.t_sparsity = static_cast<Index>(r.support.size());
  r.residual_norm = (phi * x - y).norm();
  r.x = std::move(x);
  r.stats = std::move(stats);
  return r;
}

void check_problem(const DenseMatrix& phi, const RealVector& y,
                   const char* who) {
  if (phi.rows() != y.size()) {
    throw DimensionError(std::string(who) + ": measurement matrix has " +
                         std::to_string(phi.rows()) + " rows but y has length " +
                         std::to_string(y.size()));
  }
  if (phi.cols() == 0) {
    throw DimensionError(std::string(who) + ": empty measurement matrix");
  }
  require_finite(phi, who);
  require_finite(y, who);
}

}  // namespace maxfs
