#include "chainfair/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainfair/errors.hpp"
#include "chainfair/tridiagonal.hpp"

namespace chainfair {

namespace {

constexpr std::size_t kFixedPointMaxIter = 1'000'000;
constexpr std::size_t kNewtonMaxIter = 100;
constexpr int kMaxHalvings = 30;
constexpr double kBoxLo = -0.5;
constexpr double kBoxHi = 1.5;
// Above this length a failed direct solve is seeded from a shorter chain.
constexpr std::size_t kSeedPairs = 4096;

EmissionVector initial_guess(const ChainParams& params, const SolveOptions& opts) {
  if (!opts.x0) return EmissionVector(params.n, 1.0);
  if (opts.x0->size() != params.n) {
    throw ContractError("SolveOptions: x0 has length " + std::to_string(opts.x0->size()) +
                        ", expected " + std::to_string(params.n));
  }
  for (double v : *opts.x0) {
    if (!std::isfinite(v)) throw ContractError("SolveOptions: x0 is not finite");
  }
  return *opts.x0;
}

bool is_mirror_symmetric(std::span<const double> x) {
  for (std::size_t i = 0, j = x.size(); i < j--; ++i) {
    if (x[i] != x[j]) return false;
  }
  return true;
}

bool inside_box(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return v >= kBoxLo && v <= kBoxHi; });
}

bool physical(std::span<const double> x, double alpha) {
  return std::all_of(x.begin(), x.end(), [alpha](double v) {
    return v > 0.0 && v <= alpha * (1.0 + 1e-12);
  });
}

// Index of full-chain position j in the folded half-chain.
std::size_t fold_index(std::size_t j, std::size_t n, std::size_t m) {
  return j < m ? j : n - 1 - j;
}

struct NewtonOutcome {
  EmissionVector x;
  double residual = 0.0;
  bool converged = false;
};

// One Newton correction for either the full system or the folded one.
// Returns false if the linear system could not be solved.
bool newton_direction(double alpha, std::span<const double> x, std::size_t unknowns,
                      std::vector<double>& step) {
  const std::size_t n = x.size();
  std::vector<double> lower(unknowns, 0.0), diag(unknowns, 1.0), upper(unknowns, 0.0);
  std::vector<double> rhs(unknowns);
  for (std::size_t i = 0; i < unknowns; ++i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] : 0.0;
    rhs[i] = -(x[i] - alpha * ((1.0 - left) * (1.0 - right)));
    auto add = [&](std::size_t col, double value) {
      if (col == i) {
        diag[i] += value;
      } else if (col + 1 == i) {
        lower[i] += value;
      } else {
        upper[i] += value;
      }
    };
    if (i > 0) add(fold_index(i - 1, n, unknowns), alpha * (1.0 - right));
    if (i + 1 < n) add(fold_index(i + 1, n, unknowns), alpha * (1.0 - left));
  }
  try {
    step = solve_tridiagonal(lower, diag, upper, rhs);
  } catch (const LinearSolveError&) {
    return false;
  }
  return true;
}

// Newton trial point from x: damped correction, or a relaxed fixed-point
// step when the linear system is singular.
EmissionVector newton_trial(double alpha, const EmissionVector& x, bool folded,
                            std::vector<double>& step) {
  const std::size_t n = x.size();
  const std::size_t unknowns = folded ? (n + 1) / 2 : n;
  EmissionVector trial(n);
  if (newton_direction(alpha, x, unknowns, step)) {
    double t = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (std::size_t j = 0; j < n; ++j) {
        trial[j] = x[j] + t * step[folded ? fold_index(j, n, unknowns) : j];
      }
      if (inside_box(trial)) break;
      t *= 0.5;
    }
  } else {
    const EmissionVector fx = apply_F(alpha, x);
    for (std::size_t j = 0; j < n; ++j) trial[j] = 0.5 * (x[j] + fx[j]);
  }
  return trial;
}

NewtonOutcome newton_iterate(double alpha, EmissionVector x, bool folded, double tol,
                             std::size_t max_iter) {
  std::vector<double> step;
  NewtonOutcome out;
  out.residual = fixed_point_residual(alpha, x);
  for (std::size_t it = 0; it < max_iter && std::isfinite(out.residual); ++it) {
    if (out.residual <= tol) break;
    x = newton_trial(alpha, x, folded, step);
    out.residual = fixed_point_residual(alpha, x);
  }
  out.converged = out.residual <= tol;
  if (out.converged) {
    // One polishing step; quadratic convergence makes it nearly free.
    EmissionVector polished = newton_trial(alpha, x, folded, step);
    const double r = fixed_point_residual(alpha, polished);
    if (r <= out.residual) {
      x = std::move(polished);
      out.residual = r;
    }
  }
  out.x = std::move(x);
  return out;
}

// Initial guess for a long symmetric chain built from the solution y of a
// chain shorter by a multiple of 4: whole periods of the interior pattern are
// inserted in each half, which keeps the parity seen from both borders.
EmissionVector stretch_seed(const EmissionVector& y, std::size_t n) {
  const std::size_t shorter = y.size();
  const std::size_t extra = (n - shorter) / 2;  // even
  const std::size_t h = std::max<std::size_t>(2, (shorter / 4) & ~std::size_t{1});
  const std::size_t half = (n + 1) / 2;
  EmissionVector x(n);
  for (std::size_t j = 0; j < half; ++j) {
    if (j < h) {
      x[j] = y[j];
    } else if (j < h + extra) {
      x[j] = y[h - 2 + (j - h) % 2];
    } else {
      x[j] = y[j - extra];
    }
  }
  for (std::size_t j = half; j < n; ++j) x[j] = x[n - 1 - j];
  return x;
}

}  // namespace

void SolveOptions::validate() const {
  if (!(tol > 0.0)) throw DomainError("SolveOptions: tol must be > 0");
  if (max_iter && *max_iter < 1) throw DomainError("SolveOptions: max_iter must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) {
    throw DomainError("SolveOptions: relaxation must lie in (0,1]");
  }
}

EmissionVector fixed_point_solve(const ChainParams& params, const SolveOptions& opts) {
  params.validate();
  opts.validate();
  const std::size_t max_iter = opts.max_iter.value_or(kFixedPointMaxIter);
  const double w = opts.relaxation;
  EmissionVector x = initial_guess(params, opts);
  double res = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    EmissionVector fx = apply_F(params.alpha, x);
    res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) res = std::max(res, std::abs(fx[i] - x[i]));
    if (res <= opts.tol) return x;
    if (!std::isfinite(res)) break;
    if (w == 1.0) {
      x = std::move(fx);
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - w) * x[i] + w * fx[i];
    }
  }
  res = fixed_point_residual(params.alpha, x);
  if (res <= opts.tol) return x;
  throw ConvergenceError("fixed_point_solve: no convergence for n = " +
                             std::to_string(params.n) +
                             ", alpha = " + std::to_string(params.alpha) +
                             " (residual " + std::to_string(res) + ")",
                         std::move(x), res);
}

EmissionVector newton_solve(const ChainParams& params, const SolveOptions& opts) {
  params.validate();
  opts.validate();
  const std::size_t max_iter = opts.max_iter.value_or(kNewtonMaxIter);
  EmissionVector x0 = initial_guess(params, opts);
  const bool folded = is_mirror_symmetric(x0);
  const double alpha = params.alpha;

  NewtonOutcome direct = newton_iterate(alpha, x0, folded, opts.tol, max_iter);
  if (direct.converged && physical(direct.x, alpha)) return direct.x;

  if (folded && params.n > kSeedPairs) {
    const std::size_t shorter = params.n - 4 * ((params.n - kSeedPairs + 3) / 4);
    SolveOptions sub = opts;
    sub.x0.reset();
    const EmissionVector seed = stretch_seed(newton_solve({shorter, alpha}, sub), params.n);
    NewtonOutcome seeded = newton_iterate(alpha, seed, true, opts.tol, max_iter);
    if (seeded.converged && physical(seeded.x, alpha)) return seeded.x;
  }

  // Continuation in alpha from a value where the direct solve is reliable.
  double current = std::min(alpha, 0.5);
  NewtonOutcome path = newton_iterate(current, x0, folded, opts.tol, max_iter);
  if (!path.converged || !physical(path.x, current)) {
    throw ConvergenceError("newton_solve: no convergence for n = " +
                               std::to_string(params.n) + ", alpha = " +
                               std::to_string(alpha),
                           std::move(direct.x), direct.residual);
  }
  double h = 0.05;
  while (current < alpha) {
    const double next = std::min(alpha, current + h);
    NewtonOutcome trial = newton_iterate(next, path.x, folded, opts.tol, max_iter);
    if (trial.converged && physical(trial.x, next)) {
      path = std::move(trial);
      current = next;
      h = std::min(2.0 * h, 0.1);
    } else {
      h *= 0.5;
      if (h < 1e-8) {
        throw ConvergenceError("newton_solve: continuation stalled at alpha = " +
                                   std::to_string(current) + " for n = " +
                                   std::to_string(params.n),
                               std::move(path.x), path.residual);
      }
    }
  }
  return path.x;
}

EmissionVector solve_chain(const ChainParams& params, SolverMethod method,
                           const SolveOptions& opts) {
  return method == SolverMethod::newton ? newton_solve(params, opts)
                                        : fixed_point_solve(params, opts);
}

ContractionCertificate contraction_check(const ChainParams& params,
                                         std::span<const double> x) {
  ContractionCertificate cert;
  double dist = 0.0;
  for (double v : x) dist = std::max(dist, std::abs(v - 1.0));
  cert.domain_ok = dist < 1.0 / (2.0 * params.alpha);
  cert.norm_bound = jacobian_F(params, x).sup_norm();
  cert.contractive = cert.norm_bound < 1.0;
  return cert;
}

}  // namespace chainfair
