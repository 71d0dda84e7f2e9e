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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace maxfs::lp {
namespace {

LpModel make_model(std::initializer_list<std::initializer_list<double>> rows,
                   std::initializer_list<double> b,
                   std::initializer_list<double> c) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(c.size());
  DenseMatrix a(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  RealVector bv(m), cv(n);
  i = 0;
  for (double v : b) bv[i++] = v;
  i = 0;
  for (double v : c) cv[i++] = v;
  return LpModel(a, bv, cv);
}

void expect_kkt(const LpModel& model, const LpSolution& sol) {
  ASSERT_EQ(sol.status, Status::kOptimal);
  const double tol = 1e-8;
  const RealVector r = model.a() * sol.primal - model.b();
  if (r.size() > 0) EXPECT_LE(r.cwiseAbs().maxCoeff(), tol);
  EXPECT_LE(duality_gap(model, sol), 1e-8 * (1 + std::abs(sol.objective)));
  for (Index j = 0; j < model.num_vars(); ++j) {
    const double x = sol.primal[j], d = sol.reduced_costs[j];
    const double lo = model.lower(j), hi = model.upper(j);
    EXPECT_GE(x, lo - tol);
    EXPECT_LE(x, hi + tol);
    const bool at_lo = std::isfinite(lo) && x <= lo + tol;
    const bool at_hi = std::isfinite(hi) && x >= hi - tol;
    if (at_lo && at_hi) continue;
    if (at_lo) {
      EXPECT_GE(d, -tol) << "var " << j;
    } else if (at_hi) {
      EXPECT_LE(d, tol) << "var " << j;
    } else {
      EXPECT_LE(std::abs(d), tol) << "interior var " << j;
    }
  }
}

TEST(LpSolveTest, CheaperVariableWins) {
  const LpModel model = make_model({{1, 1}}, {1}, {2, 1});
  const LpSolution sol = solve(model);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.primal[0], 0.0, 1e-12);
  EXPECT_NEAR(sol.primal[1], 1.0, 1e-12);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
  expect_kkt(model, sol);
}

TEST(LpSolveTest, BoundConflictIsInfeasible) {
  EXPECT_EQ(solve(make_model({{1}}, {-1}, {1})).status, Status::kInfeasible);
}

TEST(LpSolveTest, DualOfFixingConstraint) {
  const LpSolution sol = solve(make_model({{1}}, {5}, {1}));
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.objective, 5.0, 1e-12);
  EXPECT_NEAR(sol.duals[0], 1.0, 1e-12);
}

TEST(LpSolveTest, UnboundedFreeVariable) {
  LpModel model = make_model({{1, -1}}, {0}, {-1, 0});
  model.set_bounds(0, -kInf, kInf).set_bounds(1, -kInf, kInf);
  // x0 = x1, minimize -x0: unbounded.
  EXPECT_EQ(solve(model).status, Status::kUnbounded);
}

TEST(LpSolveTest, FreeVariablesAndUpperBounds) {
  // min x0 + 2 x1 - x2, x0 - x1 = -1, x1 + x2 = 4, x0 free, 0<=x1, x2<=3.
  LpModel model = make_model({{1, -1, 0}, {0, 1, 1}}, {-1, 4}, {1, 2, -1});
  model.set_bounds(0, -kInf, kInf).set_bounds(2, 0.0, 3.0);
  const LpSolution sol = solve(model);
  ASSERT_EQ(sol.status, Status::kOptimal);
  // x2 = 3 -> x1 = 1 -> x0 = 0 -> Z = 0 + 2 - 3 = -1.
  EXPECT_NEAR(sol.objective, -1.0, 1e-10);
  EXPECT_NEAR(sol.primal[2], 3.0, 1e-10);
  expect_kkt(model, sol);
}

TEST(LpModelTest, SetObjectiveReadBackAndRestore) {
  const LpModel original = make_model({{1, 1, 1, 1}}, {1}, {1, 1, 1, 1});
  LpModel model = original;
  model.set_objective_coeff(3, 0.0);
  EXPECT_EQ(model.obj()[3], 0.0);
  model.set_objective_coeff(3, 1.0);
  EXPECT_TRUE(model == original);
  EXPECT_THROW(model.set_objective_coeff(4, 1.0), std::out_of_range);
}

TEST(LpModelTest, ReweightedObjectiveMatchesFreshModel) {
  std::mt19937_64 rng(17);
  const DenseMatrix phi = testing::gaussian_matrix(4, 8, rng);
  const RealVector y = testing::gaussian_vector(4, rng);
  DenseMatrix a(4, 16);
  a << phi, -phi;
  LpModel edited(a, y, RealVector::Ones(16));
  SimplexSolver solver;
  solver.solve(edited);
  edited.set_objective_coeff(2, 0.1).set_objective_coeff(10, 0.1);
  const LpSolution warm = solver.solve(edited);
  EXPECT_TRUE(warm.warm_started);

  RealVector c = RealVector::Ones(16);
  c[2] = c[10] = 0.1;
  const LpSolution fresh = solve(LpModel(a, y, c));
  ASSERT_EQ(warm.status, Status::kOptimal);
  EXPECT_NEAR(warm.objective, fresh.objective, 1e-10);
  expect_kkt(edited, warm);
}

TEST(LpModelTest, FixVariable) {
  LpModel model = make_model({{1, 1}}, {1}, {0, 1});
  model.fix_variable(0, 0.0);
  const LpSolution sol = solve(model);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.primal[0], 0.0, 1e-12);
  EXPECT_NEAR(sol.primal[1], 1.0, 1e-12);

  LpModel single = make_model({{1}}, {1}, {1});
  single.fix_variable(0, 0.0);
  EXPECT_EQ(solve(single).status, Status::kInfeasible);
}

TEST(LpModelTest, FixOutsideBoundsThrows) {
  LpModel model = make_model({{1, 1}}, {1}, {0, 1});
  EXPECT_THROW(model.fix_variable(0, -1.0), std::invalid_argument);
}

TEST(LpModelTest, FixUnfixRestores) {
  std::mt19937_64 rng(23);
  const DenseMatrix a = testing::gaussian_matrix(3, 7, rng);
  const RealVector x0 = testing::gaussian_vector(7, rng).cwiseAbs();
  const LpModel original(a, a * x0, RealVector::LinSpaced(7, 1.0, 2.0));
  LpModel model = original;
  SimplexSolver solver;
  const LpSolution before = solver.solve(model);
  model.fix_variable(1, 0.0).fix_variable(4, 0.0);
  solver.solve(model);
  model.unfix_variable(1).unfix_variable(4);
  EXPECT_TRUE(model == original);
  const LpSolution after = solver.solve(model);
  ASSERT_EQ(before.status, after.status);
  EXPECT_NEAR(before.objective, after.objective, 1e-10);
}

// Random feasible LPs with a dual-feasible cost so the optimum is finite.
TEST(LpPropertyTest, DualityAndComplementarySlackness) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = 3 + static_cast<Index>(trial % 6);
    const Index n = 2 * m + static_cast<Index>(trial % 3);
    const DenseMatrix a = testing::gaussian_matrix(m, n, rng);
    RealVector x0(n), s(n);
    for (Index j = 0; j < n; ++j) {
      x0[j] = 2.0 * u01(rng);
      s[j] = u01(rng);
    }
    const RealVector c = a.transpose() * testing::gaussian_vector(m, rng) + s;
    LpModel model(a, a * x0, c);
    for (Index j = 0; j < n; j += 3) model.set_bounds(j, 0.0, 3.0);
    expect_kkt(model, solve(model));
  }
}

// Minimize over {x >= 0, G x <= h} in the plane by brute-force vertex scan.
double vertex_enumeration(const DenseMatrix& g, const RealVector& h,
                          const RealVector& c) {
  const Index k = g.rows();
  DenseMatrix lines(k + 2, 2);
  RealVector rhs(k + 2);
  lines.topRows(k) = g;
  rhs.head(k) = h;
  lines.row(k) << -1, 0;
  lines.row(k + 1) << 0, -1;
  rhs[k] = rhs[k + 1] = 0;
  double best = kInf;
  for (Index p = 0; p < k + 2; ++p) {
    for (Index q = p + 1; q < k + 2; ++q) {
      Eigen::Matrix2d mat;
      mat << lines.row(p), lines.row(q);
      if (std::abs(mat.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = mat.inverse() * Eigen::Vector2d(rhs[p], rhs[q]);
      if (((lines * v) - rhs).maxCoeff() > 1e-9) continue;
      best = std::min(best, c.dot(v));
    }
  }
  return best;
}

TEST(LpPropertyTest, TwoVariableAgreesWithVertexEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index k = 2 + trial % 4;
    DenseMatrix g(k + 2, 2);
    RealVector h(k + 2);
    for (Index i = 0; i < k; ++i) {
      g(i, 0) = u(rng);
      g(i, 1) = u(rng);
      h[i] = 0.5 + std::abs(u(rng));
    }
    g.row(k) << 1, 0;
    g.row(k + 1) << 0, 1;
    h[k] = h[k + 1] = 10.0;
    const RealVector c2 = Eigen::Vector2d(u(rng), u(rng));

    DenseMatrix a(k + 2, 2 + k + 2);
    a << g, DenseMatrix::Identity(k + 2, k + 2);
    RealVector c = RealVector::Zero(2 + k + 2);
    c.head(2) = c2;
    const LpSolution sol = solve(LpModel(a, h, c));
    ASSERT_EQ(sol.status, Status::kOptimal);
    EXPECT_NEAR(sol.objective, vertex_enumeration(g, h, c2), 1e-10);
  }
}

TEST(LpPropertyTest, DeterministicAcrossRuns) {
  std::mt19937_64 rng(7);
  const DenseMatrix phi = testing::gaussian_matrix(20, 40, rng);
  DenseMatrix a(20, 80);
  a << phi, -phi;
  RealVector x = RealVector::Zero(40);
  x[3] = 1.5;
  x[17] = -2.0;
  x[30] = 0.7;
  const LpModel model(a, phi * x, RealVector::Ones(80));
  const LpSolution s1 = solve(model);
  const LpSolution s2 = solve(model);
  EXPECT_EQ(s1.iterations, s2.iterations);
  EXPECT_TRUE(s1.primal == s2.primal);
  EXPECT_TRUE(s1.duals == s2.duals);
}

TEST(LpPropertyTest, DegenerateBasisPursuitAtScale) {
  // 128 x 512 split-variable LP with a 20-sparse solution: heavily degenerate.
  std::mt19937_64 rng(31);
  const DenseMatrix phi = testing::gaussian_matrix(128, 256, rng);
  const IndexSet support = testing::random_support(256, 20, rng);
  const RealVector truth = testing::planted_vector(256, support, rng);
  DenseMatrix a(128, 512);
  a << phi, -phi;
  const LpModel model(a, phi * truth, RealVector::Ones(512));
  const LpSolution sol = solve(model);
  expect_kkt(model, sol);
  const RealVector x = sol.primal.head(256) - sol.primal.tail(256);
  EXPECT_LE((x - truth).cwiseAbs().maxCoeff(), 1e-8);
}

}  // namespace
}  // namespace maxfs::lp
