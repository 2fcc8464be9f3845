#include "chainfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainfair/errors.hpp"
#include "chainfair/tridiagonal.hpp"

namespace chainfair {

namespace {

constexpr double kLo = 0.01;
constexpr double kHi = 0.99;
constexpr std::size_t kScanPoints = 99;
constexpr double kGoldenWidth = 0.01;

double scan_point(std::size_t k) {
  return kLo + (kHi - kLo) * static_cast<double>(k) / static_cast<double>(kScanPoints - 1);
}

void check_n(std::size_t n) {
  if (n < 1) throw DomainError("fairness: n must be >= 1");
}

}  // namespace

double fairness_objective(double alpha, std::size_t n, SolverMethod method) {
  check_n(n);
  const ChainParams params{n, alpha};
  SolveOptions opts;
  if (method == SolverMethod::fixed_point) opts.tol = 1e-14;
  const EmissionVector x = solve_chain(params, method, opts);
  return entropy(x) / static_cast<double>(n);
}

AdjointState adjoint_state(const ChainParams& params, std::span<const double> x) {
  params.validate();
  const std::size_t n = params.n;
  const TriJacobian jac = jacobian_F(params, x);
  std::vector<double> grad = grad_entropy(x);
  for (double& g : grad) g /= static_cast<double>(n);

  // M = (F' - I)^T: M(i, i-1) = F'(i-1, i), M(i, i+1) = F'(i+1, i).
  std::vector<double> lower(n, 0.0), diag(n, -1.0), upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) lower[i] = jac.upper()[i - 1];
    if (i + 1 < n) upper[i] = jac.lower()[i + 1];
  }
  AdjointState state;
  state.lambda = solve_tridiagonal(lower, diag, upper, grad);
  for (std::size_t i = 0; i < n; ++i) {
    double r = diag[i] * state.lambda[i] - grad[i];
    if (i > 0) r += lower[i] * state.lambda[i - 1];
    if (i + 1 < n) r += upper[i] * state.lambda[i + 1];
    state.residual = std::max(state.residual, std::abs(r));
  }
  return state;
}

double fairness_gradient(double alpha, std::size_t n) {
  check_n(n);
  const ChainParams params{n, alpha};
  const EmissionVector x = newton_solve(params);
  const AdjointState adj = adjoint_state(params, x);
  const EmissionVector fx = apply_F(params, x);
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += adj.lambda[i] * fx[i];
  return -dot / alpha;
}

OptResult maximize_fairness(std::size_t n, double tol_alpha) {
  check_n(n);
  if (!(tol_alpha > 0.0)) throw DomainError("maximize_fairness: tol_alpha must be > 0");
  OptResult result;

  std::vector<double> slope(kScanPoints);
  for (std::size_t k = 0; k < kScanPoints; ++k) {
    slope[k] = fairness_gradient(scan_point(k), n);
    ++result.evaluations;
  }
  std::size_t change_at = 0;
  for (std::size_t k = 0; k + 1 < kScanPoints; ++k) {
    if ((slope[k] > 0.0) != (slope[k + 1] > 0.0)) {
      ++result.sign_changes;
      change_at = k;
    }
  }
  result.unimodal = result.sign_changes == 1 && slope[change_at] > 0.0;

  if (!result.unimodal) {
    double best = -1.0;
    for (std::size_t k = 0; k < kScanPoints; ++k) {
      const double a = scan_point(k);
      const double j = fairness_objective(a, n);
      ++result.evaluations;
      if (j > best) {
        best = j;
        result.alpha_hat = a;
      }
    }
    result.J_value = best;
    result.bracket = scan_point(1) - scan_point(0);
    return result;
  }

  // Golden-section on J over the whole search interval.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = kLo, hi = kHi;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double jc = fairness_objective(c, n);
  double jd = fairness_objective(d, n);
  result.evaluations += 2;
  while (hi - lo > kGoldenWidth) {
    if (jc > jd) {
      hi = d;
      d = c;
      jd = jc;
      c = hi - inv_phi * (hi - lo);
      jc = fairness_objective(c, n);
    } else {
      lo = c;
      c = d;
      jc = jd;
      d = lo + inv_phi * (hi - lo);
      jd = fairness_objective(d, n);
    }
    ++result.evaluations;
  }

  // Bisection on the sign of J'. Fall back to the scan bracket if the
  // golden interval does not straddle the sign change.
  double slope_lo = fairness_gradient(lo, n);
  double slope_hi = fairness_gradient(hi, n);
  result.evaluations += 2;
  if (!(slope_lo > 0.0 && slope_hi <= 0.0)) {
    lo = scan_point(change_at);
    hi = scan_point(change_at + 1);
  }
  while (hi - lo > tol_alpha) {
    const double mid = 0.5 * (lo + hi);
    const double s = fairness_gradient(mid, n);
    ++result.evaluations;
    if (s > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.alpha_hat = 0.5 * (lo + hi);
  result.bracket = hi - lo;
  result.J_value = fairness_objective(result.alpha_hat, n);
  ++result.evaluations;
  return result;
}

std::vector<SweepRow> sweep_fairness(std::size_t n, const std::vector<double>& alphas) {
  check_n(n);
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    SweepRow row;
    row.alpha = a;
    try {
      row.J = fairness_objective(a, n);
    } catch (const std::exception& e) {
      row.ok = false;
      row.J = std::nan("");
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace chainfair
