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

#include "maxfs/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace maxfs {

Index t_sparsity(const RealVector& x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("t_sparsity: tol must be > 0");
  return (x.array().abs() > tol).count();
}

bool is_success(Index t, Index s) { return t == s; }

double geometric_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("geometric_mean: empty list");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("geometric_mean: nonpositive value " +
                                  std::to_string(v));
    }
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

double rse(const RealVector& f_hat, const RealVector& f) {
  if (f_hat.size() != f.size()) {
    throw DimensionError("rse: length mismatch (" +
                         std::to_string(f_hat.size()) + " vs " +
                         std::to_string(f.size()) + ")");
  }
  const double ref = f.squaredNorm();
  if (ref == 0.0) throw std::invalid_argument("rse: zero reference signal");
  return (f_hat - f).squaredNorm() / ref;
}

}  // namespace maxfs
