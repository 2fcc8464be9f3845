#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "chainfair/datafit.hpp"
#include "chainfair/errors.hpp"
#include "chainfair/solver.hpp"

using namespace chainfair;

namespace {

ThroughputTrace model_trace(std::size_t n, double alpha, double scale = 2.0) {
  ThroughputTrace t;
  for (double v : newton_solve({n, alpha})) t.rates.push_back(scale * v);
  t.label = "model";
  return t;
}

}  // namespace

TEST(Normalize, ThreePairTrace) {
  const auto rho = normalize({{1.55, 0.04, 1.55}, "measured"});
  EXPECT_DOUBLE_EQ(rho[0], 1.0);
  EXPECT_NEAR(rho[1], 0.0258, 1e-4);
  EXPECT_DOUBLE_EQ(rho[2], 1.0);
}

TEST(Normalize, ConstantTrace) {
  for (double v : normalize({{0.7, 0.7, 0.7, 0.7}, ""})) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Normalize, MaxNormalization) {
  const auto rho = normalize({{1.0, 4.0, 2.0}, ""}, Normalization::max_pair);
  EXPECT_DOUBLE_EQ(rho[0], 0.25);
  EXPECT_DOUBLE_EQ(rho[1], 1.0);
  EXPECT_DOUBLE_EQ(rho[2], 0.5);
}

TEST(Normalize, ScaleInvariant) {
  const ThroughputTrace t{{0.9, 0.3, 0.5, 0.2}, ""};
  ThroughputTrace scaled = t;
  for (double& r : scaled.rates) r *= 1000.0;
  const auto a = normalize(t), b = normalize(scaled);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(Normalize, ModelSelfConsistent) {
  const auto x = newton_solve({7, 0.6});
  const auto rho = normalize({x, ""});
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(rho[i], x[i] / x[0]);
}

TEST(Normalize, Errors) {
  EXPECT_THROW(normalize({{0.0, 1.0}, ""}), NormalizationError);
  EXPECT_THROW(normalize({{1.0}, ""}), DomainError);
  EXPECT_THROW(normalize({{1.0, -0.5}, ""}), DomainError);
}

TEST(Fit, RoundTripSixPairs) {
  const FitResult r = fit_alpha(model_trace(6, 0.75));
  EXPECT_NEAR(r.alpha_fit, 0.75, 1e-3);
  EXPECT_LT(r.sse, 1e-8);
}

TEST(Fit, RoundTripGrid) {
  for (std::size_t n = 3; n <= 20; ++n) {
    for (double a : {0.3, 0.5, 0.7, 0.862}) {
      const FitResult r = fit_alpha(model_trace(n, a));
      EXPECT_NEAR(r.alpha_fit, a, 1e-3) << n << " " << a;
    }
  }
}

TEST(Fit, ResultInvariants) {
  const ThroughputTrace t{{1.2, 0.5, 0.8, 0.6, 1.1}, ""};
  const FitBounds b{0.2, 0.8};
  const FitResult r = fit_alpha(t, b);
  EXPECT_GE(r.alpha_fit, b.lo);
  EXPECT_LE(r.alpha_fit, b.hi);
  double sse = 0.0;
  for (double e : r.residuals) sse += e * e;
  EXPECT_NEAR(r.sse, sse, 1e-15);
  EXPECT_GE(r.grid_minima, 1u);
}

TEST(Fit, NoisyRecovery) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  double sum = 0.0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    ThroughputTrace t = model_trace(6, 0.75);
    for (double& r : t.rates) r *= 1.0 + noise(gen);
    sum += fit_alpha(t).alpha_fit;
  }
  EXPECT_NEAR(sum / seeds, 0.75, 0.01);
}

TEST(Fit, ThreePairTrace) {
  const FitResult r = fit_alpha({{1.55, 0.04, 1.55}, "measured"});
  EXPECT_NEAR(r.alpha_fit, 0.862, 0.02);
}

TEST(Fit, SolverIndependentObjective) {
  const ThroughputTrace t{{1.0, 0.4, 0.7, 0.45, 0.65, 0.5}, ""};
  const FitResult a = fit_alpha(t, {}, Normalization::first_pair, SolverMethod::newton);
  const FitResult b = fit_alpha(t, {}, Normalization::first_pair, SolverMethod::fixed_point);
  EXPECT_NEAR(a.sse, b.sse, 1e-9);
  EXPECT_NEAR(a.alpha_fit, b.alpha_fit, 1e-4);
}

TEST(Fit, UnitInvariant) {
  ThroughputTrace t{{1.0, 0.4, 0.7, 0.45}, ""};
  const double a = fit_alpha(t).alpha_fit;
  for (double& r : t.rates) r *= 1e6;
  EXPECT_DOUBLE_EQ(fit_alpha(t).alpha_fit, a);
}

TEST(Fit, BadBounds) {
  const ThroughputTrace t{{1.0, 0.4, 0.7}, ""};
  EXPECT_THROW(fit_alpha(t, {0.5, 0.4}), DomainError);
  EXPECT_THROW(fit_alpha(t, {0.0, 0.5}), DomainError);
}

TEST(Compare, PerfectTraceHasZeroResiduals) {
  for (const auto& row : compare_normalized(model_trace(8, 0.6), 0.6)) {
    EXPECT_NEAR(row.residual, 0.0, 1e-12);
  }
}

TEST(Compare, LongChainProfile) {
  const auto x = newton_solve({100, 0.6826});
  const auto rows = compare_normalized(model_trace(100, 0.6826), 0.6826);
  ASSERT_EQ(rows.size(), 100u);
  EXPECT_EQ(rows[0].pair, 1u);
  EXPECT_NEAR(rows[49].model_rho, x[49] / x[0], 1e-15);
  EXPECT_NEAR(rows[49].model_rho, 0.3177 / x[0], 0.002);
  EXPECT_LT(rows[1].model_rho, rows[3].model_rho);
  EXPECT_LT(rows[3].model_rho, rows[5].model_rho);
}

TEST(TraceCsv, RoundTrip) {
  const ThroughputTrace t{{1.55, 0.04, 1.55, 0.1234567890123}, "x"};
  std::stringstream ss;
  write_trace_csv(ss, t);
  const ThroughputTrace back = read_trace_csv(ss, "x");
  EXPECT_EQ(back.rates, t.rates);
}

TEST(TraceCsv, Errors) {
  std::istringstream out_of_order("pair,rate\n2,1.0\n1,0.5\n");
  EXPECT_THROW(read_trace_csv(out_of_order), ParseError);
  std::istringstream no_rate("pair,value\n1,1.0\n2,0.5\n");
  EXPECT_THROW(read_trace_csv(no_rate), ParseError);
  std::istringstream bad_number("pair,rate\n1,fast\n2,0.5\n");
  EXPECT_THROW(read_trace_csv(bad_number), ParseError);
  std::istringstream zero_anchor("pair,rate\n1,0\n2,0.5\n");
  EXPECT_THROW(read_trace_csv(zero_anchor), NormalizationError);
}
