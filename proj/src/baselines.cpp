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

#include "maxfs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maxfs/lp.hpp"

namespace maxfs {

void GreedyStop::validate() const {
  if (!(residual_tol > 0.0)) {
    throw std::invalid_argument("GreedyStop: residual_tol must be > 0");
  }
  if (max_sparsity && *max_sparsity < 0) {
    throw std::invalid_argument("GreedyStop: negative max_sparsity");
  }
}

void IrwlsConfig::validate() const {
  if (!(p >= 0.0 && p < 2.0)) {
    throw std::invalid_argument("IrwlsConfig: p must lie in [0, 2)");
  }
  if (!(eps_shrink > 0.0 && eps_shrink < 1.0)) {
    throw std::invalid_argument("IrwlsConfig: eps_shrink must lie in (0, 1)");
  }
  if (!(eps_initial > 0.0) || !(eps_floor > 0.0) || !(inner_tol > 0.0) ||
      max_outer < 1) {
    throw std::invalid_argument("IrwlsConfig: nonpositive parameter");
  }
}

RecoveryResult basis_pursuit(const DenseMatrix& phi, const RealVector& y,
                             double nonzero_tol) {
  check_problem(phi, y, "basis_pursuit");
  const Index n = phi.cols();
  DenseMatrix a(phi.rows(), 2 * n);
  a << phi, -phi;
  const lp::LpModel model(std::move(a), y, RealVector::Ones(2 * n));
  const lp::LpSolution sol = lp::solve(model);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error(std::string("basis_pursuit: LP ") +
                             lp::to_string(sol.status));
  }
  RecoveryStats stats;
  stats.lp_solves = 1;
  stats.iterations = 1;
  stats.simplex_pivots = sol.iterations;
  RealVector x = sol.primal.head(n) - sol.primal.tail(n);
  return finalize_result(phi, y, std::move(x), nonzero_tol, stats);
}

namespace {

Index support_cap(const DenseMatrix& phi, const GreedyStop& stop) {
  Index cap = std::min(phi.rows(), phi.cols());
  if (stop.max_sparsity) cap = std::min(cap, *stop.max_sparsity);
  return cap;
}

void require_nonzero_columns(const DenseMatrix& phi, const char* who) {
  for (Index j = 0; j < phi.cols(); ++j) {
    if (phi.col(j).squaredNorm() == 0.0) {
      throw std::invalid_argument(std::string(who) + ": column " +
                                  std::to_string(j) + " is zero");
    }
  }
}

}  // namespace

RecoveryResult matching_pursuit(const DenseMatrix& phi, const RealVector& y,
                                const GreedyStop& stop) {
  check_problem(phi, y, "matching_pursuit");
  stop.validate();
  require_nonzero_columns(phi, "matching_pursuit");
  const Index m = phi.rows(), n = phi.cols();
  const RealVector norms2 = phi.colwise().squaredNorm().transpose();
  const Index cap = support_cap(phi, stop);
  const Index max_steps = 100 * m;

  RealVector x = RealVector::Zero(n);
  RealVector r = y;
  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  Index support_size = 0;
  RecoveryStats stats;
  RealVector corr(n);
  while (r.norm() > stop.residual_tol && stats.iterations < max_steps) {
    corr.noalias() = phi.transpose() * r;
    Index winner = 0;
    corr.cwiseAbs().maxCoeff(&winner);
    if (!in_support[static_cast<std::size_t>(winner)]) {
      if (support_size >= cap) break;
      in_support[static_cast<std::size_t>(winner)] = true;
      ++support_size;
    }
    const double step = corr[winner] / norms2[winner];
    r -= step * phi.col(winner);
    x[winner] += step;
    ++stats.iterations;
    stats.residual_trace.push_back(r.norm());
  }
  return finalize_result(phi, y, std::move(x), kNonzeroTol, stats);
}

RecoveryResult omp(const DenseMatrix& phi, const RealVector& y,
                   const GreedyStop& stop) {
  check_problem(phi, y, "omp");
  stop.validate();
  require_nonzero_columns(phi, "omp");
  const Index n = phi.cols();
  const Index cap = support_cap(phi, stop);

  IndexSet order;  // selection order
  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  RealVector r = y;
  RealVector coeffs;
  RecoveryStats stats;
  RealVector corr(n);
  while (r.norm() > stop.residual_tol &&
         static_cast<Index>(order.size()) < cap) {
    corr.noalias() = phi.transpose() * r;
    Index winner = 0;
    corr.cwiseAbs().maxCoeff(&winner);
    if (in_support[static_cast<std::size_t>(winner)]) {
      throw std::logic_error("omp: residual not orthogonal to support (index " +
                             std::to_string(winner) + " re-selected)");
    }
    in_support[static_cast<std::size_t>(winner)] = true;
    order.push_back(winner);
    const DenseMatrix sub = select_columns(phi, order);
    coeffs = least_squares(sub, y);
    r = y - sub * coeffs;
    ++stats.iterations;
    stats.residual_trace.push_back(r.norm());
  }
  RealVector x = RealVector::Zero(n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    x[order[k]] = coeffs[static_cast<Index>(k)];
  }
  return finalize_result(phi, y, std::move(x), kNonzeroTol, stats);
}

RecoveryResult pfp(const DenseMatrix& phi, const RealVector& y,
                   const GreedyStop& stop) {
  check_problem(phi, y, "pfp");
  stop.validate();
  require_nonzero_columns(phi, "pfp");
  const Index m = phi.rows(), n = phi.cols();
  DenseMatrix dict(m, 2 * n);
  dict << phi, -phi;
  const Index cap = support_cap(phi, stop);
  const Index max_steps = 100 * m;

  IndexSet active;  // columns of dict, in insertion order
  std::vector<bool> in_active(static_cast<std::size_t>(2 * n), false);
  RealVector coeffs;
  RealVector r = y;
  RealVector c = RealVector::Zero(m);
  RecoveryStats stats;

  auto refit = [&]() {
    if (active.empty()) {
      coeffs.resize(0);
      c.setZero();
      r = y;
      return;
    }
    const DenseMatrix sub = select_columns(dict, active);
    const DenseMatrix pinv = pseudo_inverse(sub);
    coeffs = pinv * y;
    c = pinv.transpose() * RealVector::Ones(static_cast<Index>(active.size()));
    r = y - sub * coeffs;
  };

  while (stats.iterations < max_steps) {
    if (r.norm() <= stop.residual_tol) break;
    const RealVector corr = dict.transpose() * r;
    if (corr.maxCoeff() < stop.theta_min) break;
    if (static_cast<Index>(active.size()) >= cap) break;

    const RealVector dual_slack =
        RealVector::Ones(2 * n) - dict.transpose() * c;
    Index winner = -1;
    double best = 0.0;
    for (Index i = 0; i < 2 * n; ++i) {
      if (in_active[static_cast<std::size_t>(i)] || !(corr[i] > 0.0)) continue;
      if (dual_slack[i] <= 1e-12) continue;
      const double score = corr[i] / dual_slack[i];
      if (score > best) {
        best = score;
        winner = i;
      }
    }
    if (winner < 0) {
      stats.stalled = true;
      break;
    }
    active.push_back(winner);
    in_active[static_cast<std::size_t>(winner)] = true;
    ++stats.iterations;
    refit();
    // Drop faces whose coefficient went negative, most negative first.
    while (!active.empty() && coeffs.size() > 0 && coeffs.minCoeff() < 0.0) {
      Index worst = 0;
      coeffs.minCoeff(&worst);
      in_active[static_cast<std::size_t>(active[static_cast<std::size_t>(worst)])] =
          false;
      active.erase(active.begin() + worst);
      refit();
    }
    stats.residual_trace.push_back(r.norm());
  }

  RealVector x = RealVector::Zero(n);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Index col = active[k];
    const double v = coeffs[static_cast<Index>(k)];
    if (col < n) {
      x[col] += v;
    } else {
      x[col - n] -= v;
    }
  }
  return finalize_result(phi, y, std::move(x), kNonzeroTol, stats);
}

namespace {

// x = Q phi' (phi Q phi')^{-1} y with one step of iterative refinement.
RealVector weighted_min_norm(const DenseMatrix& phi, const RealVector& y,
                             const RealVector& q) {
  const DenseMatrix scaled = phi * q.asDiagonal();
  const DenseMatrix gram = scaled * phi.transpose();
  Eigen::LDLT<DenseMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw std::runtime_error("irwls: weighted Gram matrix is singular");
  }
  RealVector z = ldlt.solve(y);
  z += ldlt.solve(y - gram * z);
  if (!z.allFinite()) {
    throw std::runtime_error("irwls: weighted Gram matrix is singular");
  }
  return scaled.transpose() * z;
}

}  // namespace

RecoveryResult irwls(const DenseMatrix& phi, const RealVector& y,
                     const IrwlsConfig& cfg) {
  check_problem(phi, y, "irwls");
  cfg.validate();
  const Index n = phi.cols();
  RecoveryStats stats;
  RealVector x = weighted_min_norm(phi, y, RealVector::Ones(n));
  double eps = cfg.eps_initial;
  const double exponent = 1.0 - cfg.p / 2.0;
  while (stats.iterations < cfg.max_outer) {
    const RealVector q =
        (x.array().square() + eps).pow(exponent).matrix();
    RealVector next = weighted_min_norm(phi, y, q);
    ++stats.iterations;
    stats.residual_trace.push_back((phi * next - y).norm());
    const double change = (next - x).norm();
    x = std::move(next);
    if (change < cfg.inner_tol * std::sqrt(eps)) {
      eps *= cfg.eps_shrink;
      if (eps < cfg.eps_floor) break;
    }
  }
  return finalize_result(phi, y, std::move(x), kNonzeroTol, stats);
}

}  // namespace maxfs
