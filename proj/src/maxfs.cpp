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

#include "maxfs/maxfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "maxfs/baselines.hpp"
#include "maxfs/lp.hpp"

namespace maxfs {

void MaxFsConfig::validate() const {
  if (list_length < 1) {
    throw std::invalid_argument("MaxFsConfig: list_length must be >= 1");
  }
  if (!(support_weight >= 0.0 && support_weight < 1.0)) {
    throw std::invalid_argument("MaxFsConfig: support_weight must lie in [0, 1)");
  }
  if (!(nonzero_tol > 0.0) || !(zero_obj_tol >= 0.0)) {
    throw std::invalid_argument("MaxFsConfig: tolerances must be positive");
  }
  if (max_support && *max_support < 0) {
    throw std::invalid_argument("MaxFsConfig: negative max_support");
  }
}

namespace {

constexpr double kTieRelTol = 1e-9;
constexpr double kProbeInfeasTol = 1e-7;

double inf_norm(const RealVector& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Up to `count` indices from `eligible` ordered by descending key, lower
// index first on equal keys.
IndexSet top_by(IndexSet eligible, const RealVector& key, Index count) {
  std::stable_sort(eligible.begin(), eligible.end(),
                   [&](Index a, Index b) { return key[a] > key[b]; });
  if (static_cast<Index>(eligible.size()) > count) {
    eligible.resize(static_cast<std::size_t>(count));
  }
  return eligible;
}

IndexSet merge_sorted(IndexSet a, const IndexSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool improves(double z, double best) {
  if (!std::isfinite(best)) return true;
  return z < best - kTieRelTol * std::max(1.0, std::abs(best));
}

DenseMatrix split_matrix(const DenseMatrix& phi) {
  DenseMatrix a(phi.rows(), 2 * phi.cols());
  a << phi, -phi;
  return a;
}

class LpCounter {
 public:
  explicit LpCounter(lp::SimplexOptions opts = {}) : solver_(opts) {}

  lp::LpSolution solve(const lp::LpModel& model, RecoveryStats& stats) {
    lp::LpSolution sol = solver_.solve(model);
    ++stats.lp_solves;
    stats.simplex_pivots += sol.iterations;
    return sol;
  }

 private:
  lp::SimplexSolver solver_;
};

void require_optimal(const lp::LpSolution& sol, const char* who) {
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error(std::string(who) + ": LP " +
                             lp::to_string(sol.status));
  }
}

Index support_limit(const DenseMatrix& phi, const MaxFsConfig& cfg) {
  return cfg.max_support.value_or(phi.rows());
}

[[noreturn]] void no_sparse_support(const char* who, Index limit) {
  throw NoSparseSupportError(std::string(who) +
                             ": no sparse support found (support exceeds " +
                             std::to_string(limit) + ")");
}

RecoveryResult postprocess(const DenseMatrix& phi, const RealVector& y,
                           const IndexSet& support, double nonzero_tol,
                           RecoveryStats stats) {
  const IndexSet reduced = reduce_support(phi, y, support, &stats.lp_solves);
  RealVector x = solve_support_values(phi, y, reduced, &stats.lp_solves);
  return finalize_result(phi, y, std::move(x), nonzero_tol, std::move(stats));
}

}  // namespace

// ---------------------------------------------------------------------------

IndexSet reduce_support(const DenseMatrix& phi, const RealVector& y,
                        const IndexSet& support, Index* lp_solves) {
  check_problem(phi, y, "reduce_support");
  IndexSet cur = support;
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  const double tol = kProbeInfeasTol * (1.0 + inf_norm(y));
  if (cur.empty()) {
    if (inf_norm(y) > tol) {
      throw std::runtime_error("reduce_support: infeasible input support");
    }
    return cur;
  }
  const Index k = static_cast<Index>(cur.size());
  lp::SimplexOptions opts;
  opts.infeas_tol = kProbeInfeasTol;
  lp::LpModel model(split_matrix(select_columns(phi, cur)), y,
                    RealVector::Zero(2 * k));
  lp::SimplexSolver solver(opts);
  auto feasible = [&]() {
    if (lp_solves != nullptr) ++*lp_solves;
    return solver.solve(model).status == lp::Status::kOptimal;
  };
  if (!feasible()) {
    throw std::runtime_error("reduce_support: infeasible input support");
  }
  IndexSet kept;
  for (Index p = 0; p < k; ++p) {
    model.fix_variable(p, 0.0).fix_variable(p + k, 0.0);
    if (!feasible()) {
      model.unfix_variable(p).unfix_variable(p + k);
      kept.push_back(cur[static_cast<std::size_t>(p)]);
    }
  }
  return kept;
}

RealVector solve_support_values(const DenseMatrix& phi, const RealVector& y,
                                const IndexSet& support, Index* lp_solves) {
  check_problem(phi, y, "solve_support_values");
  const Index n = phi.cols();
  if (support.empty()) {
    if (inf_norm(y) > 1e-9) {
      throw std::runtime_error(
          "solve_support_values: empty support but y is nonzero");
    }
    return RealVector::Zero(n);
  }
  const Index k = static_cast<Index>(support.size());
  const lp::LpModel model(split_matrix(select_columns(phi, support)), y,
                          RealVector::Ones(2 * k));
  const lp::LpSolution sol = lp::solve(model);
  if (lp_solves != nullptr) ++*lp_solves;
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error(
        std::string("solve_support_values: restricted system ") +
        lp::to_string(sol.status));
  }
  RealVector x = RealVector::Zero(n);
  for (Index p = 0; p < k; ++p) {
    x[support[static_cast<std::size_t>(p)]] = sol.primal[p] - sol.primal[p + k];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Method B

RecoveryResult method_b(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg) {
  check_problem(phi, y, "method_b");
  cfg.validate();
  const Index n = phi.cols();
  const Index limit = support_limit(phi, cfg);
  lp::LpModel model(split_matrix(phi), y, RealVector::Ones(2 * n));
  LpCounter lp_solver;
  RecoveryStats stats;
  std::vector<bool> admitted(static_cast<std::size_t>(n), false);
  Index admitted_count = 0;

  auto values = [&](const lp::LpSolution& sol) -> RealVector {
    return sol.primal.head(n) - sol.primal.tail(n);
  };
  // l1 mass carried by variables still at full objective weight.
  auto free_mass = [&](const lp::LpSolution& sol) {
    double z = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (model.obj()[j] == 1.0) z += sol.primal[j] + sol.primal[j + n];
    }
    return z;
  };
  auto candidates_from = [&](const lp::LpSolution& sol) {
    const RealVector mag = values(sol).cwiseAbs();
    IndexSet eligible;
    for (Index j = 0; j < n; ++j) {
      if (model.obj()[j] == 1.0 && mag[j] > cfg.nonzero_tol) {
        eligible.push_back(j);
      }
    }
    if (eligible.empty()) {
      // Residual mass spread below the tolerance: rank whatever is left.
      for (Index j = 0; j < n; ++j) {
        if (model.obj()[j] == 1.0 && mag[j] > 0.0) eligible.push_back(j);
      }
    }
    IndexSet top = top_by(std::move(eligible), mag, cfg.list_length);
    std::sort(top.begin(), top.end());
    return top;
  };
  auto set_pair = [&](Index j, double w) {
    model.set_objective_coeff(j, w).set_objective_coeff(j + n, w);
  };

  lp::LpSolution current = lp_solver.solve(model, stats);
  require_optimal(current, "method_b");
  if (free_mass(current) <= cfg.zero_obj_tol) {
    return finalize_result(phi, y, RealVector::Zero(n), cfg.nonzero_tol,
                           stats);
  }
  IndexSet candidates = candidates_from(current);

  for (;;) {
    if (candidates.empty()) {
      throw std::runtime_error("method_b: no candidates left with Z > 0");
    }
    Index winner = -1;
    double winner_z = std::numeric_limits<double>::infinity();
    IndexSet next;
    bool done = false;
    for (Index k : candidates) {
      set_pair(k, 0.0);
      lp::LpSolution sol = lp_solver.solve(model, stats);
      require_optimal(sol, "method_b");
      const double z = free_mass(sol);
      if (z <= cfg.zero_obj_tol) {
        admitted[static_cast<std::size_t>(k)] = true;
        ++admitted_count;
        stats.z_trace.push_back(z);
        current = std::move(sol);
        done = true;
        break;
      }
      if (improves(z, winner_z)) {
        winner = k;
        winner_z = z;
        next = candidates_from(sol);
      }
      set_pair(k, 1.0);
    }
    ++stats.iterations;
    if (done) break;
    admitted[static_cast<std::size_t>(winner)] = true;
    ++admitted_count;
    stats.z_trace.push_back(winner_z);
    set_pair(winner, cfg.support_weight);
    if (admitted_count > limit) no_sparse_support("method_b", limit);
    candidates = std::move(next);
  }

  const IndexSet support = support_of(values(current), cfg.nonzero_tol);
  if (static_cast<Index>(support.size()) > limit) {
    no_sparse_support("method_b", limit);
  }
  return postprocess(phi, y, support, cfg.nonzero_tol, std::move(stats));
}

// ---------------------------------------------------------------------------
// Method C

RecoveryResult method_c(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg) {
  check_problem(phi, y, "method_c");
  cfg.validate();
  const Index m = phi.rows(), n = phi.cols();
  const Index limit = support_limit(phi, cfg);

  // Columns: x (free) | e+ | e-. Rows: phi x = y, then x + e+ - e- = 0.
  DenseMatrix a = DenseMatrix::Zero(m + n, 3 * n);
  a.topLeftCorner(m, n) = phi;
  a.bottomLeftCorner(n, n).setIdentity();
  a.block(m, n, n, n).setIdentity();
  a.block(m, 2 * n, n, n) = -DenseMatrix::Identity(n, n);
  RealVector b = RealVector::Zero(m + n);
  b.head(m) = y;
  RealVector obj = RealVector::Zero(3 * n);
  obj.tail(2 * n).setOnes();
  lp::LpModel model(std::move(a), std::move(b), std::move(obj));
  for (Index j = 0; j < n; ++j) model.set_bounds(j, -lp::kInf, lp::kInf);

  // Refactoring the (m+n)-row basis dominates at the default interval.
  lp::SimplexOptions opts;
  opts.refactor_interval = static_cast<int>(std::max<Index>(100, m + n));
  LpCounter lp_solver(opts);
  RecoveryStats stats;
  std::vector<bool> admitted(static_cast<std::size_t>(n), false);
  IndexSet support_set;

  auto set_elastic = [&](Index j, double w) {
    model.set_objective_coeff(n + j, w).set_objective_coeff(2 * n + j, w);
  };
  auto candidates_from = [&](const lp::LpSolution& sol, Index exclude) {
    const RealVector mag = sol.primal.head(n).cwiseAbs();
    const RealVector sens = sol.duals.tail(n).cwiseAbs();
    IndexSet nonzero, zero;
    for (Index j = 0; j < n; ++j) {
      if (admitted[static_cast<std::size_t>(j)] || j == exclude) continue;
      (mag[j] > cfg.nonzero_tol ? nonzero : zero).push_back(j);
    }
    return merge_sorted(top_by(std::move(nonzero), mag, cfg.list_length),
                        top_by(std::move(zero), sens, cfg.list_length));
  };

  lp::LpSolution current = lp_solver.solve(model, stats);
  require_optimal(current, "method_c");
  if (current.objective <= cfg.zero_obj_tol) {
    return finalize_result(phi, y, RealVector::Zero(n), cfg.nonzero_tol,
                           stats);
  }
  IndexSet candidates = candidates_from(current, -1);

  for (;;) {
    if (candidates.empty()) {
      throw std::runtime_error("method_c: no candidates left with Z > 0");
    }
    Index winner = -1;
    double winner_z = std::numeric_limits<double>::infinity();
    IndexSet next;
    bool done = false;
    for (Index k : candidates) {
      set_elastic(k, 0.0);
      lp::LpSolution sol = lp_solver.solve(model, stats);
      require_optimal(sol, "method_c");
      const double z = sol.objective;
      if (z <= cfg.zero_obj_tol) {
        admitted[static_cast<std::size_t>(k)] = true;
        support_set.push_back(k);
        stats.z_trace.push_back(z);
        current = std::move(sol);
        done = true;
        break;
      }
      if (improves(z, winner_z)) {
        winner = k;
        winner_z = z;
        next = candidates_from(sol, k);
      }
      set_elastic(k, 1.0);
    }
    ++stats.iterations;
    if (done) break;
    admitted[static_cast<std::size_t>(winner)] = true;
    support_set.push_back(winner);
    stats.z_trace.push_back(winner_z);
    set_elastic(winner, 0.0);
    if (static_cast<Index>(support_set.size()) > limit) {
      no_sparse_support("method_c", limit);
    }
    candidates = std::move(next);
  }

  std::sort(support_set.begin(), support_set.end());
  return postprocess(phi, y, support_set, cfg.nonzero_tol, std::move(stats));
}

// ---------------------------------------------------------------------------
// Method M

RecoveryResult method_m(const DenseMatrix& phi, const RealVector& y,
                        const MaxFsConfig& cfg) {
  check_problem(phi, y, "method_m");
  cfg.validate();
  const Index m = phi.rows();
  const RecoveryResult bp = basis_pursuit(phi, y, cfg.nonzero_tol);
  if (bp.t_sparsity > m - 3) {
    RecoveryResult r = method_b(phi, y, cfg);
    r.stats.used_fallback = true;
    r.stats.lp_solves += bp.stats.lp_solves;
    r.stats.simplex_pivots += bp.stats.simplex_pivots;
    return r;
  }
  RecoveryStats stats = bp.stats;
  stats.used_fallback = false;
  return postprocess(phi, y, bp.support, cfg.nonzero_tol, std::move(stats));
}

}  // namespace maxfs
