#include "chainfair/asymptotics.hpp"

#include <cmath>
#include <string>

#include "chainfair/errors.hpp"
#include "chainfair/fairness.hpp"
#include "chainfair/rng.hpp"
#include "chainfair/solver.hpp"

namespace chainfair {

RingSolution ring_fixed_point(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("ring_fixed_point: alpha must lie in (0,1], got " +
                      std::to_string(alpha));
  }
  // Smaller root of alpha x^2 - (2 alpha + 1) x + alpha = 0. The roots
  // multiply to one, so the small root is the reciprocal of the large one;
  // this form avoids cancellation as alpha -> 0.
  const double big = 2.0 * alpha + 1.0 + std::sqrt(4.0 * alpha + 1.0);
  return {2.0 * alpha / big};
}

double alpha_for_ring_prob(double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("alpha_for_ring_prob: x must lie in [0,1), got " + std::to_string(x));
  }
  return x / ((1.0 - x) * (1.0 - x));
}

FlatValue flat_value(std::size_t n) {
  if (n < 3) throw DomainError("flat_value: n must be >= 3");
  const OptResult opt = maximize_fairness(n, 1e-8);
  const EmissionVector x = newton_solve({n, opt.alpha_hat});
  return {opt.alpha_hat, x[(n + 1) / 2 - 1]};
}

std::vector<CurveRow> optimal_alpha_curve(const std::vector<std::size_t>& ns) {
  std::vector<CurveRow> rows;
  rows.reserve(ns.size());
  for (std::size_t n : ns) {
    if (n < 2) throw DomainError("optimal_alpha_curve: n must be >= 2");
    rows.push_back({n, maximize_fairness(n, 1e-7).alpha_hat});
  }
  return rows;
}

std::vector<double> circle_backoff_mc(std::size_t n_pairs, std::size_t trials,
                                      std::uint64_t seed) {
  if (n_pairs < 3) throw DomainError("circle_backoff_mc: need at least 3 pairs");
  if (trials < 1) throw DomainError("circle_backoff_mc: need at least 1 trial");
  Rng rng = make_rng(seed);
  std::vector<double> u(n_pairs);
  std::vector<std::uint64_t> wins(n_pairs, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : u) v = uniform01(rng);
    for (std::size_t i = 0; i < n_pairs; ++i) {
      const double prev = u[i == 0 ? n_pairs - 1 : i - 1];
      const double next = u[i + 1 == n_pairs ? 0 : i + 1];
      if (u[i] < prev && u[i] < next) ++wins[i];
    }
  }
  std::vector<double> freq(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    freq[i] = static_cast<double>(wins[i]) / static_cast<double>(trials);
  }
  return freq;
}

}  // namespace chainfair
