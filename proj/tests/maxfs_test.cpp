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

#include <gtest/gtest.h>

#include <random>

#include "maxfs/baselines.hpp"
#include "maxfs/lp.hpp"
#include "maxfs/oracle.hpp"
#include "test_util.hpp"

namespace maxfs {
namespace {

using testing::gaussian_matrix;
using testing::planted_vector;
using testing::random_support;

using Method = RecoveryResult (*)(const DenseMatrix&, const RealVector&,
                                  const MaxFsConfig&);

double feas_gap(const DenseMatrix& phi, const RealVector& x,
                const RealVector& y) {
  return (phi * x - y).lpNorm<Eigen::Infinity>();
}

void expect_contract(const DenseMatrix& phi, const RealVector& y,
                     const RecoveryResult& r) {
  EXPECT_LE(feas_gap(phi, r.x, y), 1e-6 * (1.0 + y.lpNorm<Eigen::Infinity>()));
  EXPECT_EQ(r.support, support_of(r.x, kNonzeroTol));
  EXPECT_EQ(r.t_sparsity, static_cast<Index>(r.support.size()));
}

struct Planted {
  DenseMatrix phi;
  RealVector a;
  RealVector y;
  IndexSet support;
};

// Unit-magnitude entries; the planted support is checked to be the unique
// minimum-cardinality solution before use.
Planted unique_planted(Index m, Index n, Index s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    Planted p;
    p.phi = gaussian_matrix(m, n, rng);
    p.support = random_support(n, s, rng);
    p.a = RealVector::Zero(n);
    std::bernoulli_distribution coin(0.5);
    for (Index j : p.support) p.a[j] = coin(rng) ? 1.0 : -1.0;
    p.y = p.phi * p.a;
    const auto o = oracle::min_support_exact(p.phi, p.y, s);
    if (o.min_cardinality == s && o.unique && o.witness_support == p.support) {
      return p;
    }
  }
  throw std::runtime_error("no unique planted instance");
}

class MaxFsMethods : public ::testing::TestWithParam<Method> {};

TEST_P(MaxFsMethods, SingleConsistentColumn) {
  DenseMatrix phi(2, 1);
  phi << 1, 2;
  RealVector y(2);
  y << 3, 6;
  const RecoveryResult r = GetParam()(phi, y, {});
  EXPECT_EQ(r.support, IndexSet({0}));
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
}

TEST_P(MaxFsMethods, ZeroMeasurementGivesEmptySupport) {
  std::mt19937_64 rng(3);
  const DenseMatrix phi = gaussian_matrix(4, 9, rng);
  const RecoveryResult r = GetParam()(phi, RealVector::Zero(4), {});
  EXPECT_TRUE(r.support.empty());
  EXPECT_EQ(r.x, RealVector::Zero(9));
  EXPECT_FALSE(r.stats.used_fallback);
}

TEST_P(MaxFsMethods, PlantedTwoSparseEightByFour) {
  const Planted p = unique_planted(4, 8, 2, 4);
  const RecoveryResult r = GetParam()(p.phi, p.y, {});
  EXPECT_EQ(r.support, p.support);
  EXPECT_LE((r.x - p.a).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST_P(MaxFsMethods, ContractsAndOracleBoundOnSmallInstances) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> dim_n(6, 12), dim_m(3, 6);
  int checked_equal = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = dim_n(rng);
    const Index m = std::min(dim_m(rng), n);
    const Index s = std::uniform_int_distribution<Index>(1, m)(rng);
    const DenseMatrix phi = gaussian_matrix(m, n, rng);
    const IndexSet sup = random_support(n, s, rng);
    const RealVector y = phi * planted_vector(n, sup, rng);
    const RecoveryResult r = GetParam()(phi, y, {});
    expect_contract(phi, y, r);
    const auto o = oracle::min_support_exact(phi, y, m);
    EXPECT_GE(r.t_sparsity, o.min_cardinality);
    // Method B only ranks nonzero entries, so it can miss a column that the
    // first LP leaves at zero. The equality half is checked for C alone.
    if (GetParam() == &method_c && o.unique && 2 * s <= m) {
      EXPECT_EQ(r.t_sparsity, o.min_cardinality) << "trial " << trial;
      ++checked_equal;
    }
    // Postprocessing leaves nothing removable.
    EXPECT_EQ(reduce_support(phi, y, r.support), r.support);
  }
  if (GetParam() == &method_c) EXPECT_GT(checked_equal, 5);
}

TEST_P(MaxFsMethods, RejectsBadConfig) {
  DenseMatrix phi(2, 1);
  phi << 1, 2;
  RealVector y(2);
  y << 3, 6;
  MaxFsConfig cfg;
  cfg.list_length = 0;
  EXPECT_THROW(GetParam()(phi, y, cfg), std::invalid_argument);
  cfg = {};
  cfg.support_weight = 1.0;
  EXPECT_THROW(GetParam()(phi, y, cfg), std::invalid_argument);
  cfg = {};
  cfg.nonzero_tol = 0.0;
  EXPECT_THROW(GetParam()(phi, y, cfg), std::invalid_argument);
}

TEST_P(MaxFsMethods, DimensionMismatchThrows) {
  EXPECT_THROW(GetParam()(DenseMatrix::Ones(3, 5), RealVector::Ones(2), {}),
               DimensionError);
}

INSTANTIATE_TEST_SUITE_P(All, MaxFsMethods,
                         ::testing::Values(&method_b, &method_c, &method_m),
                         [](const auto& info) {
                           return std::string(info.index == 0   ? "B"
                                              : info.index == 1 ? "C"
                                                                : "M");
                         });

TEST(MaxFs, MethodsBAndCAgreeOnPlantedInstance) {
  const Planted p = unique_planted(4, 8, 2, 4);
  EXPECT_EQ(method_b(p.phi, p.y).support, method_c(p.phi, p.y).support);
}

// The greedy search is not exact at m = 4. Over random draws with a unique
// planted 2-support, B succeeds on about half and C on about four fifths.
TEST(MaxFs, PlantedRecoveryRateEightByFour) {
  int b_ok = 0, c_ok = 0;
  constexpr int kDraws = 40;
  for (int seed = 100; seed < 100 + kDraws; ++seed) {
    const Planted p = unique_planted(4, 8, 2, static_cast<std::uint64_t>(seed));
    b_ok += method_b(p.phi, p.y).support == p.support;
    c_ok += method_c(p.phi, p.y).support == p.support;
  }
  EXPECT_GE(b_ok, kDraws * 4 / 10);
  EXPECT_GE(c_ok, kDraws * 7 / 10);
}

TEST(MaxFs, WinningObjectiveNonIncreasingMethodC) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix phi = gaussian_matrix(16, 40, rng);
    const RealVector y = phi * planted_vector(40, random_support(40, 9, rng), rng);
    const RecoveryResult r = method_c(phi, y);
    const auto& z = r.stats.z_trace;
    ASSERT_FALSE(z.empty());
    for (std::size_t i = 1; i < z.size(); ++i) {
      EXPECT_LE(z[i], z[i - 1] + 1e-9 * (1.0 + std::abs(z[i - 1])));
    }
  }
}

TEST(MaxFs, WinningObjectiveNonIncreasingMethodB) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix phi = gaussian_matrix(16, 40, rng);
    const RealVector y = phi * planted_vector(40, random_support(40, 9, rng), rng);
    const RecoveryResult r = method_b(phi, y);
    const auto& z = r.stats.z_trace;
    ASSERT_FALSE(z.empty());
    for (std::size_t i = 1; i < z.size(); ++i) {
      EXPECT_LE(z[i], z[i - 1] + 1e-9 * (1.0 + std::abs(z[i - 1])));
    }
  }
}

TEST(MaxFs, LpSolveCountIncludesProbes) {
  const Planted p = unique_planted(4, 8, 2, 2);
  const RecoveryResult r = method_b(p.phi, p.y);
  // Initial solve, at least one candidate test, one probe for the whole
  // support plus one per member, and the final value solve.
  EXPECT_GE(r.stats.lp_solves, 1 + 1 + 1 + 2 + 1);
}

TEST(MaxFs, MaxSupportCapRaises) {
  std::mt19937_64 rng(8);
  const DenseMatrix phi = gaussian_matrix(6, 12, rng);
  const RealVector y = phi * planted_vector(12, random_support(12, 5, rng), rng);
  MaxFsConfig cfg;
  cfg.max_support = 1;
  EXPECT_THROW(method_b(phi, y, cfg), NoSparseSupportError);
  EXPECT_THROW(method_c(phi, y, cfg), NoSparseSupportError);
}

TEST(MethodM, UsesBasisPursuitWhenItIsSparse) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix phi = gaussian_matrix(8, 16, rng);
    const IndexSet sup = random_support(16, 2, rng);
    const RealVector a = planted_vector(16, sup, rng);
    const RealVector y = phi * a;
    const RecoveryResult bp = basis_pursuit(phi, y);
    const auto o = oracle::min_support_exact(phi, y, 2);
    if (!(o.unique && o.witness_support == sup && bp.support == sup)) continue;
    const RecoveryResult r = method_m(phi, y);
    EXPECT_FALSE(r.stats.used_fallback);
    EXPECT_LE((r.x - bp.x).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LE((r.x - a).lpNorm<Eigen::Infinity>(), 1e-6);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(MethodM, FallsBackToMethodBWhenBasisPursuitIsDense) {
  std::mt19937_64 rng(22);
  bool seen = false;
  for (Index s = 3; s <= 8 && !seen; ++s) {
    for (int trial = 0; trial < 5 && !seen; ++trial) {
      const DenseMatrix phi = gaussian_matrix(8, 16, rng);
      const RealVector y = phi * planted_vector(16, random_support(16, s, rng), rng);
      if (basis_pursuit(phi, y).t_sparsity <= 8 - 3) continue;
      const RecoveryResult r = method_m(phi, y);
      const RecoveryResult b = method_b(phi, y);
      EXPECT_TRUE(r.stats.used_fallback);
      EXPECT_EQ(r.support, b.support);
      EXPECT_LE((r.x - b.x).lpNorm<Eigen::Infinity>(), 1e-12);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

// Probes run in ascending order, so column 0 is tried first and dropped.
TEST(ReduceSupport, DropsRedundantParallelColumn) {
  DenseMatrix phi(2, 2);
  phi << 1, 2, 0, 0;
  RealVector y(2);
  y << 3, 0;
  EXPECT_EQ(reduce_support(phi, y, {0, 1}), IndexSet({1}));
  EXPECT_EQ(reduce_support(phi, y, {0}), IndexSet({0}));
}

TEST(ReduceSupport, MinimalSupportUnchanged) {
  std::mt19937_64 rng(9);
  const DenseMatrix phi = gaussian_matrix(5, 10, rng);
  const RealVector y = phi.col(2) * 1.5 - phi.col(7);
  EXPECT_EQ(reduce_support(phi, y, {2, 7}), IndexSet({2, 7}));
}

TEST(ReduceSupport, RemovesExtraIndexOutsideSpan) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix phi = gaussian_matrix(5, 10, rng);
    const IndexSet sup = random_support(10, 3, rng);
    const Index i = sup[0], j = sup[1], extra = sup[2];
    const RealVector y = phi.col(i) * 0.7 + phi.col(j) * 2.0;
    // Rank check: adding the extra column increases rank, so y cannot
    // need it.
    DenseMatrix three(5, 3);
    three << phi.col(i), phi.col(j), phi.col(extra);
    ASSERT_EQ(Eigen::FullPivLU<DenseMatrix>(three).rank(), 3);
    IndexSet in = {i, j, extra};
    std::sort(in.begin(), in.end());
    EXPECT_EQ(reduce_support(phi, y, in), IndexSet({i, j}));
  }
}

TEST(ReduceSupport, InfeasibleSupportThrows) {
  DenseMatrix phi(2, 2);
  phi << 1, 0, 0, 1;
  RealVector y(2);
  y << 1, 1;
  EXPECT_THROW(reduce_support(phi, y, {0}), std::runtime_error);
}

TEST(ReduceSupport, CountsProbes) {
  DenseMatrix phi(2, 2);
  phi << 1, 2, 0, 0;
  RealVector y(2);
  y << 3, 0;
  Index solves = 0;
  reduce_support(phi, y, {0, 1}, &solves);
  EXPECT_EQ(solves, 3);
}

TEST(SolveSupportValues, SingleColumn) {
  DenseMatrix phi(2, 3);
  phi << 0, 1, 0, 0, 2, 0;
  RealVector y(2);
  y << 3, 6;
  const RealVector x = solve_support_values(phi, y, {1});
  EXPECT_NEAR(x[1], 3.0, 1e-12);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(x[2], 0.0);
}

TEST(SolveSupportValues, ZeroMeasurement) {
  EXPECT_EQ(solve_support_values(DenseMatrix::Ones(2, 3), RealVector::Zero(2), {}),
            RealVector::Zero(3));
}

TEST(SolveSupportValues, SquareSystemMatchesDenseSolve) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix phi = gaussian_matrix(6, 15, rng);
    const IndexSet sup = random_support(15, 6, rng);
    const RealVector y = testing::gaussian_vector(6, rng);
    const RealVector expect =
        select_columns(phi, sup).partialPivLu().solve(y);
    const RealVector x = solve_support_values(phi, y, sup);
    for (std::size_t p = 0; p < sup.size(); ++p) {
      EXPECT_NEAR(x[sup[p]], expect[static_cast<Index>(p)], 1e-8);
    }
  }
}

TEST(SolveSupportValues, InfeasibleThrows) {
  DenseMatrix phi(2, 2);
  phi << 1, 0, 0, 1;
  RealVector y(2);
  y << 1, 1;
  EXPECT_THROW(solve_support_values(phi, y, {1}), std::runtime_error);
  EXPECT_THROW(solve_support_values(phi, y, {}), std::runtime_error);
}

}  // namespace
}  // namespace maxfs
