#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chainfair/errors.hpp"
#include "chainfair/fairness.hpp"
#include "chainfair/solver.hpp"
#include "chainfair/tridiagonal.hpp"

using namespace chainfair;

namespace {

double central_difference(double alpha, std::size_t n, double h = 1e-5) {
  return (fairness_objective(alpha + h, n) - fairness_objective(alpha - h, n)) / (2 * h);
}

}  // namespace

TEST(Objective, VanishesAtSmallAlpha) {
  for (std::size_t n : {1, 5, 40}) EXPECT_LT(fairness_objective(1e-6, n), 1e-4);
}

TEST(Objective, SinglePair) {
  for (double a : {0.1, 0.3, 0.5, 0.9}) {
    EXPECT_NEAR(fairness_objective(a, 1), -a * std::log(a), 1e-14);
  }
}

TEST(Objective, TwoPairsScalarOracle) {
  for (double a : {0.2, 0.5, 0.8}) {
    const double x = a / (1 + a);
    EXPECT_NEAR(fairness_objective(a, 2), -x * std::log(x), 1e-12);
  }
  const OptResult r = maximize_fairness(2, 1e-8);
  EXPECT_NEAR(r.alpha_hat, 1.0 / (std::exp(1.0) - 1.0), 1e-6);
}

TEST(Objective, SolverIndependent) {
  for (std::size_t n : {3, 10, 25}) {
    for (double a : {0.2, 0.5, 0.7, 0.9}) {
      EXPECT_NEAR(fairness_objective(a, n, SolverMethod::fixed_point),
                  fairness_objective(a, n, SolverMethod::newton), 1e-9);
    }
  }
}

TEST(Objective, OptimumDominatesGrid) {
  const double best = fairness_objective(0.5536, 10);
  for (int k = 1; k <= 9; ++k) EXPECT_GE(best, fairness_objective(0.1 * k, 10));
}

TEST(Adjoint, SolvesTransposedSystem) {
  const ChainParams p{9, 0.7};
  const auto x = newton_solve(p);
  const AdjointState st = adjoint_state(p, x);
  EXPECT_LE(st.residual, 1e-10);
  // (F' - I)^T lambda = grad E / n, checked densely
  const TriJacobian J = jacobian_F(p, x);
  const auto g = grad_entropy(x);
  for (std::size_t j = 0; j < p.n; ++j) {
    double lhs = -st.lambda[j];
    for (std::size_t i = 0; i < p.n; ++i) lhs += J(i, j) * st.lambda[i];
    EXPECT_NEAR(lhs, g[j] / p.n, 1e-12);
  }
}

TEST(Gradient, SignNearOptimum) {
  EXPECT_LE(std::abs(fairness_gradient(0.5536, 10)), 1e-3);
  EXPECT_GT(fairness_gradient(0.2, 5), 0.0);
  EXPECT_LT(fairness_gradient(0.9, 5), 0.0);
}

TEST(Gradient, MatchesFiniteDifferencesOnGrid) {
  for (std::size_t n = 2; n <= 30; ++n) {
    for (int k = 1; k <= 9; ++k) {
      const double a = 0.1 * k;
      const double g = fairness_gradient(a, n);
      const double fd = central_difference(a, n);
      EXPECT_LE(std::abs(g - fd), 1e-6 * std::max(1.0, std::abs(g))) << n << " " << a;
    }
  }
}

TEST(Gradient, SinglePair) {
  for (double a : {0.2, 0.6}) EXPECT_NEAR(fairness_gradient(a, 1), -std::log(a) - 1.0, 1e-10);
}

TEST(Maximize, ReferenceOptima) {
  EXPECT_NEAR(maximize_fairness(10).alpha_hat, 0.5536, 0.002);
  EXPECT_NEAR(maximize_fairness(20).alpha_hat, 0.5977, 0.002);
  EXPECT_NEAR(maximize_fairness(100).alpha_hat, 0.6826, 0.002);
}

TEST(Maximize, ResultInvariants) {
  for (std::size_t n : {1, 3, 10}) {
    const OptResult r = maximize_fairness(n, 1e-6);
    EXPECT_GT(r.alpha_hat, 0.0);
    EXPECT_LT(r.alpha_hat, 1.0);
    EXPECT_LE(r.bracket, 1e-6);
    EXPECT_TRUE(r.unimodal);
    EXPECT_EQ(r.sign_changes, 1u);
    EXPECT_NEAR(r.J_value, fairness_objective(r.alpha_hat, n), 1e-15);
  }
  EXPECT_NEAR(maximize_fairness(1, 1e-8).alpha_hat, std::exp(-1.0), 1e-6);
}

TEST(Maximize, IncreasingAndBelowThreeQuarters) {
  double prev = 0.0;
  for (std::size_t n : {10, 20, 50, 100, 500}) {
    const double a = maximize_fairness(n, 1e-6).alpha_hat;
    EXPECT_GT(a, prev) << n;
    EXPECT_LT(a, 0.75);
    prev = a;
  }
}

TEST(Maximize, RejectsBadArguments) {
  EXPECT_THROW(maximize_fairness(0), DomainError);
  EXPECT_THROW(maximize_fairness(5, 0.0), DomainError);
}

TEST(Sweep, PreservesOrderAndPeaksNearOptimum) {
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  const auto rows = sweep_fairness(20, grid);
  ASSERT_EQ(rows.size(), grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].alpha, grid[i]);
    EXPECT_TRUE(rows[i].ok);
    if (rows[i].J > rows[best].J) best = i;
  }
  EXPECT_NEAR(rows[best].alpha, 0.5977, 0.01);
  const OptResult r = maximize_fairness(20);
  EXPECT_LE(r.J_value, rows[best].J + 1e-3);
  EXPECT_GE(r.J_value, rows[best].J - 1e-12);
}

TEST(Sweep, SinglePairPeak) {
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  const auto rows = sweep_fairness(1, grid);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].J, -grid[i] * std::log(grid[i]), 1e-14);
    if (rows[i].J > rows[best].J) best = i;
  }
  EXPECT_NEAR(rows[best].alpha, std::exp(-1.0), 0.01);
}

TEST(Sweep, UnimodalForHundredPairs) {
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  const auto rows = sweep_fairness(100, grid);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].J > rows[peak].J) peak = i;
  }
  for (std::size_t i = 1; i <= peak; ++i) EXPECT_GT(rows[i].J, rows[i - 1].J);
  for (std::size_t i = peak + 1; i < rows.size(); ++i) EXPECT_LT(rows[i].J, rows[i - 1].J);
}

TEST(Sweep, MarksBadRows) {
  const auto rows = sweep_fairness(5, {0.5, 1.5});
  EXPECT_TRUE(rows[0].ok);
  EXPECT_FALSE(rows[1].ok);
  EXPECT_FALSE(rows[1].error.empty());
}
