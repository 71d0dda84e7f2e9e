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

#ifndef MAXFS_LP_HPP_
#define MAXFS_LP_HPP_

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "maxfs/numcore.hpp"

namespace maxfs::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status s);

/// Thrown when the simplex exceeds its iteration cap.
class StalledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min obj'x  s.t.  A x = b,  lower <= x <= upper.
///
/// The constraint matrix is fixed at construction; objective coefficients and
/// bounds may be edited between solves. A fixed variable keeps its original
/// bounds underneath so that unfix_variable can restore them.
class LpModel {
 public:
  /// Bounds default to [0, +inf).
  LpModel(DenseMatrix a, RealVector b, RealVector obj);

  Index num_vars() const { return a_.cols(); }
  Index num_cons() const { return a_.rows(); }

  const DenseMatrix& a() const { return a_; }
  const RealVector& b() const { return b_; }
  const RealVector& obj() const { return obj_; }

  /// Effective bounds, taking fixings into account.
  double lower(Index var) const;
  double upper(Index var) const;
  bool is_fixed(Index var) const;

  LpModel& set_objective_coeff(Index var, double value);
  LpModel& set_bounds(Index var, double lo, double hi);
  LpModel& fix_variable(Index var, double value);
  LpModel& unfix_variable(Index var);

  /// Shared by copies; identifies the constraint matrix for warm starts.
  std::uint64_t structure_id() const { return structure_id_; }

  friend bool operator==(const LpModel& x, const LpModel& y);

 private:
  void check_index(Index var, const char* op) const;

  DenseMatrix a_;
  RealVector b_;
  RealVector obj_;
  RealVector lower_;
  RealVector upper_;
  std::vector<std::optional<double>> fixed_;
  std::uint64_t structure_id_;
};

struct LpSolution {
  Status status = Status::kInfeasible;
  RealVector primal;
  double objective = 0.0;
  /// One multiplier per equality row; reduced cost = obj - A' duals.
  RealVector duals;
  RealVector reduced_costs;
  Index iterations = 0;
  bool warm_started = false;
};

struct SimplexOptions {
  double feas_tol = 1e-8;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Infeasible when the phase-I optimum exceeds this times (1 + ||b||inf).
  double infeas_tol = 1e-8;
  int refactor_interval = 100;
};

/// Revised simplex on the bounded-variable form. Keeps the last optimal basis
/// and its inverse, and re-uses them on the next solve of a model with the
/// same structure_id when that basis is still primal feasible.
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  LpSolution solve(const LpModel& model);

  /// Drops the cached basis; the next solve starts from phase I.
  void reset();

  const SimplexOptions& options() const { return options_; }

  struct State;

 private:
  SimplexOptions options_;
  std::unique_ptr<State> state_;
};

/// Cold solve.
LpSolution solve(const LpModel& model, const SimplexOptions& options = {});

/// |Z - b'y - sum of d_j x_j over nonbasic-at-bound variables|. With
/// reduced costs d = c - A'y this is the gap between primal and dual
/// objectives of the bounded problem.
double duality_gap(const LpModel& model, const LpSolution& sol);

}  // namespace maxfs::lp

#endif  // MAXFS_LP_HPP_
