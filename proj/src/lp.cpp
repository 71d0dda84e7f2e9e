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

#include "maxfs/lp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace maxfs::lp {

namespace {

std::atomic<std::uint64_t> g_next_structure_id{1};

enum class VarState : std::uint8_t { kBasic, kLower, kUpper, kFree };

constexpr double kDegenerateStep = 1e-12;

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "Optimal";
    case Status::kInfeasible:
      return "Infeasible";
    case Status::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LpModel

LpModel::LpModel(DenseMatrix a, RealVector b, RealVector obj)
    : a_(std::move(a)),
      b_(std::move(b)),
      obj_(std::move(obj)),
      structure_id_(g_next_structure_id.fetch_add(1)) {
  if (b_.size() != a_.rows()) {
    throw DimensionError("LpModel: rhs length " + std::to_string(b_.size()) +
                         " != constraint count " + std::to_string(a_.rows()));
  }
  if (obj_.size() != a_.cols()) {
    throw DimensionError("LpModel: objective length " +
                         std::to_string(obj_.size()) + " != variable count " +
                         std::to_string(a_.cols()));
  }
  require_finite(a_, "LpModel constraint matrix");
  require_finite(b_, "LpModel rhs");
  require_finite(obj_, "LpModel objective");
  lower_ = RealVector::Zero(a_.cols());
  upper_ = RealVector::Constant(a_.cols(), kInf);
  fixed_.assign(static_cast<std::size_t>(a_.cols()), std::nullopt);
}

void LpModel::check_index(Index var, const char* op) const {
  if (var < 0 || var >= num_vars()) {
    throw std::out_of_range(std::string(op) + ": variable " +
                            std::to_string(var) + " out of range [0, " +
                            std::to_string(num_vars()) + ")");
  }
}

double LpModel::lower(Index var) const {
  const auto& f = fixed_[static_cast<std::size_t>(var)];
  return f ? *f : lower_[var];
}

double LpModel::upper(Index var) const {
  const auto& f = fixed_[static_cast<std::size_t>(var)];
  return f ? *f : upper_[var];
}

bool LpModel::is_fixed(Index var) const {
  check_index(var, "is_fixed");
  return fixed_[static_cast<std::size_t>(var)].has_value();
}

LpModel& LpModel::set_objective_coeff(Index var, double value) {
  check_index(var, "set_objective_coeff");
  if (!std::isfinite(value)) {
    throw std::invalid_argument("set_objective_coeff: non-finite value");
  }
  obj_[var] = value;
  return *this;
}

LpModel& LpModel::set_bounds(Index var, double lo, double hi) {
  check_index(var, "set_bounds");
  if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf ||
      hi == -kInf) {
    throw std::invalid_argument("set_bounds: invalid interval for variable " +
                                std::to_string(var));
  }
  lower_[var] = lo;
  upper_[var] = hi;
  return *this;
}

LpModel& LpModel::fix_variable(Index var, double value) {
  check_index(var, "fix_variable");
  if (!(value >= lower_[var] && value <= upper_[var]) ||
      !std::isfinite(value)) {
    throw std::invalid_argument("fix_variable: value " +
                                std::to_string(value) +
                                " outside bounds of variable " +
                                std::to_string(var));
  }
  fixed_[static_cast<std::size_t>(var)] = value;
  return *this;
}

LpModel& LpModel::unfix_variable(Index var) {
  check_index(var, "unfix_variable");
  fixed_[static_cast<std::size_t>(var)].reset();
  return *this;
}

bool operator==(const LpModel& x, const LpModel& y) {
  return x.a_.rows() == y.a_.rows() && x.a_.cols() == y.a_.cols() &&
         x.a_ == y.a_ && x.b_ == y.b_ && x.obj_ == y.obj_ &&
         x.lower_ == y.lower_ && x.upper_ == y.upper_ && x.fixed_ == y.fixed_;
}

// ---------------------------------------------------------------------------
// Simplex engine

struct SimplexSolver::State {
  std::uint64_t structure_id = 0;
  bool valid = false;
  Index n = 0;
  Index m = 0;
  std::vector<Index> basis;
  std::vector<VarState> var_state;
  RealVector art_sign;
  DenseMatrix binv;
  RealVector x;
  int pivots_since_refactor = 0;
};

namespace {

enum class PhaseResult { kOptimal, kUnbounded, kLostFeasibility };

class Engine {
 public:
  Engine(const LpModel& model, const SimplexOptions& opts,
         SimplexSolver::State& st)
      : model_(model),
        opts_(opts),
        st_(st),
        n_(model.num_vars()),
        m_(model.num_cons()),
        lo_(n_ + m_),
        hi_(n_ + m_),
        cost_(RealVector::Zero(n_ + m_)),
        iteration_cap_(50 * (n_ + m_)),
        bland_after_(5 * (n_ + m_)) {
    for (Index j = 0; j < n_; ++j) {
      lo_[j] = model.lower(j);
      hi_[j] = model.upper(j);
    }
  }

  LpSolution run() {
    LpSolution sol;
    bool have_phase2_start = false;
    if (try_warm_start()) {
      have_phase2_start = true;
      sol.warm_started = true;
    }
    st_.valid = false;
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (!have_phase2_start) {
        cold_start();
        const PhaseResult p1 = iterate();
        // Phase I is bounded below by zero, so it always ends optimal.
        (void)p1;
        double infeas = 0.0;
        for (Index i = 0; i < m_; ++i) {
          if (st_.basis[static_cast<std::size_t>(i)] >= n_) {
            infeas += std::abs(st_.x[st_.basis[static_cast<std::size_t>(i)]]);
          }
        }
        const double bnorm = m_ > 0 ? model_.b().cwiseAbs().maxCoeff() : 0.0;
        st_.valid = true;
        st_.structure_id = model_.structure_id();
        if (infeas > opts_.infeas_tol * (1.0 + bnorm)) {
          sol.status = Status::kInfeasible;
          sol.iterations = iterations_;
          return sol;
        }
        st_.valid = false;
      }
      enter_phase_two();
      const PhaseResult p2 = iterate();
      if (p2 == PhaseResult::kLostFeasibility) {
        have_phase2_start = false;
        continue;
      }
      st_.valid = true;
      st_.structure_id = model_.structure_id();
      if (p2 == PhaseResult::kUnbounded) {
        sol.status = Status::kUnbounded;
        sol.iterations = iterations_;
        return sol;
      }
      extract(sol);
      return sol;
    }
    throw StalledError("simplex: stalled (numerical loss of feasibility)");
  }

 private:
  bool is_basic(Index j) const {
    return st_.var_state[static_cast<std::size_t>(j)] == VarState::kBasic;
  }

  // alpha = B^{-1} a_j
  void ftran(Index j, RealVector& alpha) const {
    if (j < n_) {
      alpha.noalias() = st_.binv * model_.a().col(j);
    } else {
      const Index r = j - n_;
      alpha = st_.binv.col(r) * st_.art_sign[r];
    }
  }

  void place_nonbasic(Index j) {
    auto& s = st_.var_state[static_cast<std::size_t>(j)];
    const bool lo_fin = std::isfinite(lo_[j]);
    const bool hi_fin = std::isfinite(hi_[j]);
    if (s == VarState::kUpper && !hi_fin) s = VarState::kLower;
    if (s == VarState::kLower && !lo_fin) s = hi_fin ? VarState::kUpper
                                                    : VarState::kFree;
    if (s == VarState::kFree && (lo_fin || hi_fin)) {
      s = lo_fin ? VarState::kLower : VarState::kUpper;
    }
    switch (s) {
      case VarState::kLower:
        st_.x[j] = lo_[j];
        break;
      case VarState::kUpper:
        st_.x[j] = hi_[j];
        break;
      case VarState::kFree:
        st_.x[j] = 0.0;
        break;
      case VarState::kBasic:
        break;
    }
  }

  void refactor() {
    DenseMatrix bmat = DenseMatrix::Zero(m_, m_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = st_.basis[static_cast<std::size_t>(i)];
      if (j < n_) {
        bmat.col(i) = model_.a().col(j);
      } else {
        bmat(j - n_, i) = st_.art_sign[j - n_];
      }
    }
    st_.binv = bmat.partialPivLu().inverse();
    st_.pivots_since_refactor = 0;
  }

  void recompute_basic() {
    RealVector xn = st_.x.head(n_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = st_.basis[static_cast<std::size_t>(i)];
      if (j < n_) xn[j] = 0.0;
    }
    RealVector rhs = model_.b() - model_.a() * xn;
    for (Index r = 0; r < m_; ++r) {
      if (!is_basic(n_ + r)) rhs[r] -= st_.art_sign[r] * st_.x[n_ + r];
    }
    const RealVector xb = st_.binv * rhs;
    for (Index i = 0; i < m_; ++i) {
      st_.x[st_.basis[static_cast<std::size_t>(i)]] = xb[i];
    }
  }

  double max_basic_violation() const {
    double v = 0.0;
    for (Index i = 0; i < m_; ++i) {
      const Index j = st_.basis[static_cast<std::size_t>(i)];
      v = std::max({v, lo_[j] - st_.x[j], st_.x[j] - hi_[j]});
    }
    return v;
  }

  double residual_inf() const {
    if (m_ == 0) return 0.0;
    RealVector r = model_.a() * st_.x.head(n_) - model_.b();
    for (Index k = 0; k < m_; ++k) r[k] += st_.art_sign[k] * st_.x[n_ + k];
    return r.cwiseAbs().maxCoeff();
  }

  bool try_warm_start() {
    if (!st_.valid || st_.structure_id != model_.structure_id() ||
        st_.n != n_ || st_.m != m_) {
      return false;
    }
    for (Index r = 0; r < m_; ++r) {
      lo_[n_ + r] = 0.0;
      hi_[n_ + r] = 0.0;
    }
    for (Index j = 0; j < n_ + m_; ++j) {
      if (!is_basic(j)) place_nonbasic(j);
    }
    if (st_.pivots_since_refactor >= opts_.refactor_interval) refactor();
    recompute_basic();
    return max_basic_violation() <= opts_.feas_tol;
  }

  void cold_start() {
    st_.n = n_;
    st_.m = m_;
    st_.basis.assign(static_cast<std::size_t>(m_), 0);
    st_.var_state.assign(static_cast<std::size_t>(n_ + m_), VarState::kLower);
    st_.x = RealVector::Zero(n_ + m_);
    for (Index j = 0; j < n_; ++j) place_nonbasic(j);
    RealVector resid = model_.b() - model_.a() * st_.x.head(n_);
    st_.art_sign = RealVector(m_);
    st_.binv = DenseMatrix::Zero(m_, m_);
    for (Index r = 0; r < m_; ++r) {
      const double s = resid[r] >= 0.0 ? 1.0 : -1.0;
      st_.art_sign[r] = s;
      st_.binv(r, r) = s;
      st_.basis[static_cast<std::size_t>(r)] = n_ + r;
      st_.var_state[static_cast<std::size_t>(n_ + r)] = VarState::kBasic;
      st_.x[n_ + r] = std::abs(resid[r]);
      lo_[n_ + r] = 0.0;
      hi_[n_ + r] = kInf;
    }
    st_.pivots_since_refactor = 0;
    cost_.setZero();
    cost_.tail(m_).setOnes();
  }

  void enter_phase_two() {
    for (Index r = 0; r < m_; ++r) {
      lo_[n_ + r] = 0.0;
      hi_[n_ + r] = 0.0;
      if (!is_basic(n_ + r)) {
        st_.var_state[static_cast<std::size_t>(n_ + r)] = VarState::kLower;
        st_.x[n_ + r] = 0.0;
      }
    }
    cost_.head(n_) = model_.obj();
    cost_.tail(m_).setZero();
  }

  void price(RealVector& lambda, RealVector& d) const {
    RealVector cb(m_);
    for (Index i = 0; i < m_; ++i) {
      cb[i] = cost_[st_.basis[static_cast<std::size_t>(i)]];
    }
    lambda.noalias() = st_.binv.transpose() * cb;
    d.resize(n_ + m_);
    d.head(n_) = cost_.head(n_);
    d.head(n_).noalias() -= model_.a().transpose() * lambda;
    for (Index r = 0; r < m_; ++r) {
      d[n_ + r] = cost_[n_ + r] - st_.art_sign[r] * lambda[r];
    }
  }

  // Direction the variable would move to improve the objective, or 0.
  int improving_direction(Index j, double dj) const {
    switch (st_.var_state[static_cast<std::size_t>(j)]) {
      case VarState::kBasic:
        return 0;
      case VarState::kLower:
        return (hi_[j] > lo_[j] && dj < -opts_.opt_tol) ? 1 : 0;
      case VarState::kUpper:
        return (hi_[j] > lo_[j] && dj > opts_.opt_tol) ? -1 : 0;
      case VarState::kFree:
        if (dj < -opts_.opt_tol) return 1;
        if (dj > opts_.opt_tol) return -1;
        return 0;
    }
    return 0;
  }

  PhaseResult iterate() {
    RealVector lambda, d, alpha(m_);
    Index degenerate_run = 0;
    bool bland = false;
    bool verified = false;
    for (;;) {
      price(lambda, d);
      Index q = -1;
      int dir = 0;
      double best = 0.0;
      for (Index j = 0; j < n_ + m_; ++j) {
        const int dj_dir = improving_direction(j, d[j]);
        if (dj_dir == 0) continue;
        if (bland) {
          q = j;
          dir = dj_dir;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          q = j;
          dir = dj_dir;
        }
      }
      if (q < 0) {
        if (verified) return PhaseResult::kOptimal;
        // Confirm against drift before declaring optimality.
        recompute_basic();
        if (residual_inf() > 0.1 * opts_.feas_tol ||
            max_basic_violation() > opts_.feas_tol) {
          refactor();
          recompute_basic();
          if (max_basic_violation() > opts_.feas_tol) {
            return PhaseResult::kLostFeasibility;
          }
        }
        verified = true;
        continue;
      }
      verified = false;

      if (++iterations_ > iteration_cap_) {
        throw StalledError("simplex: stalled after " +
                           std::to_string(iteration_cap_) + " iterations");
      }

      ftran(q, alpha);
      const Index leave_row = ratio_test(alpha, dir, bland);
      double step = kInf;
      if (leave_row >= 0) step = pending_step_;
      const double span = hi_[q] - lo_[q];
      if (std::isfinite(span) && span <= step) {
        // Bound flip, no basis change.
        move(q, dir, span, alpha);
        st_.var_state[static_cast<std::size_t>(q)] =
            dir > 0 ? VarState::kUpper : VarState::kLower;
        st_.x[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate_run = 0;
        bland = false;
        continue;
      }
      if (leave_row < 0) return PhaseResult::kUnbounded;

      move(q, dir, step, alpha);
      const Index leaving = st_.basis[static_cast<std::size_t>(leave_row)];
      if (pending_to_upper_) {
        st_.x[leaving] = hi_[leaving];
        st_.var_state[static_cast<std::size_t>(leaving)] = VarState::kUpper;
      } else {
        st_.x[leaving] = lo_[leaving];
        st_.var_state[static_cast<std::size_t>(leaving)] = VarState::kLower;
      }
      st_.basis[static_cast<std::size_t>(leave_row)] = q;
      st_.var_state[static_cast<std::size_t>(q)] = VarState::kBasic;
      update_inverse(alpha, leave_row);

      if (step <= kDegenerateStep) {
        if (++degenerate_run >= bland_after_) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      if (++st_.pivots_since_refactor >= opts_.refactor_interval) {
        refactor();
        recompute_basic();
      }
    }
  }

  void move(Index q, int dir, double step, const RealVector& alpha) {
    if (step == 0.0) return;
    st_.x[q] += dir * step;
    for (Index i = 0; i < m_; ++i) {
      st_.x[st_.basis[static_cast<std::size_t>(i)]] -= dir * step * alpha[i];
    }
  }

  // Two-pass Harris ratio test (textbook minimum ratio with lowest-index ties
  // under Bland's rule). Returns the leaving row or -1; the step length and
  // which bound the leaving variable reaches go to pending_*.
  Index ratio_test(const RealVector& alpha, int dir, bool bland) {
    const double tol = opts_.feas_tol;
    auto ratio = [&](Index i, double slack_tol, bool& to_upper) -> double {
      const double a = alpha[i];
      if (std::abs(a) <= opts_.pivot_tol) return kInf;
      const double rate = -dir * a;
      const Index j = st_.basis[static_cast<std::size_t>(i)];
      if (rate < 0.0 && std::isfinite(lo_[j])) {
        to_upper = false;
        return (st_.x[j] - lo_[j] + slack_tol) / -rate;
      }
      if (rate > 0.0 && std::isfinite(hi_[j])) {
        to_upper = true;
        return (hi_[j] - st_.x[j] + slack_tol) / rate;
      }
      return kInf;
    };

    Index leave = -1;
    bool to_upper = false;
    if (bland) {
      double best = kInf;
      Index best_var = -1;
      for (Index i = 0; i < m_; ++i) {
        bool up = false;
        const double r = std::max(ratio(i, 0.0, up), 0.0);
        if (!std::isfinite(r)) continue;
        const Index j = st_.basis[static_cast<std::size_t>(i)];
        if (r < best - kDegenerateStep ||
            (r <= best + kDegenerateStep && j < best_var)) {
          best = r;
          best_var = j;
          leave = i;
          to_upper = up;
        }
      }
      pending_step_ = best;
    } else {
      double bound = kInf;
      for (Index i = 0; i < m_; ++i) {
        bool up = false;
        bound = std::min(bound, ratio(i, tol, up));
      }
      if (!std::isfinite(bound)) {
        pending_step_ = kInf;
        return -1;
      }
      double best_pivot = 0.0;
      double chosen = kInf;
      for (Index i = 0; i < m_; ++i) {
        bool up = false;
        const double r = ratio(i, 0.0, up);
        if (r <= bound && std::abs(alpha[i]) > best_pivot) {
          best_pivot = std::abs(alpha[i]);
          chosen = r;
          leave = i;
          to_upper = up;
        }
      }
      pending_step_ = std::max(chosen, 0.0);
    }
    pending_to_upper_ = to_upper;
    return leave;
  }

  void update_inverse(const RealVector& alpha, Index r) {
    const Eigen::RowVectorXd pivot_row = st_.binv.row(r) / alpha[r];
    st_.binv.noalias() -= alpha * pivot_row;
    st_.binv.row(r) = pivot_row;
  }

  void extract(LpSolution& sol) const {
    RealVector lambda, d;
    price(lambda, d);
    sol.status = Status::kOptimal;
    sol.primal = st_.x.head(n_);
    sol.objective = model_.obj().dot(sol.primal);
    sol.duals = lambda;
    sol.reduced_costs = d.head(n_);
    sol.iterations = iterations_;
  }

  const LpModel& model_;
  const SimplexOptions& opts_;
  SimplexSolver::State& st_;
  const Index n_;
  const Index m_;
  RealVector lo_;
  RealVector hi_;
  RealVector cost_;
  const Index iteration_cap_;
  const Index bland_after_;
  Index iterations_ = 0;
  double pending_step_ = kInf;
  bool pending_to_upper_ = false;
};

}  // namespace

SimplexSolver::SimplexSolver(SimplexOptions options)
    : options_(options), state_(std::make_unique<State>()) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpSolution SimplexSolver::solve(const LpModel& model) {
  Engine engine(model, options_, *state_);
  return engine.run();
}

void SimplexSolver::reset() { state_->valid = false; }

LpSolution solve(const LpModel& model, const SimplexOptions& options) {
  SimplexSolver solver(options);
  return solver.solve(model);
}

double duality_gap(const LpModel& model, const LpSolution& sol) {
  if (sol.status != Status::kOptimal) {
    throw std::invalid_argument("duality_gap: solution is not optimal");
  }
  const double dual_obj =
      model.b().dot(sol.duals) + sol.reduced_costs.dot(sol.primal);
  return std::abs(sol.objective - dual_obj);
}

}  // namespace maxfs::lp
