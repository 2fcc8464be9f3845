#pragma once

#include <cstddef>
#include <optional>

#include "chainfair/model.hpp"

namespace chainfair {

struct SolveOptions {
  /// Sup-norm threshold on x - F_alpha(x).
  double tol = 1e-12;
  /// Unset means 10^6 for fixed_point_solve and 100 for newton_solve.
  std::optional<std::size_t> max_iter;
  /// Unset means all-ones.
  std::optional<EmissionVector> x0;
  /// Fixed-point update x <- (1 - w) x + w F(x). w = 1 is plain successive
  /// approximation, which falls into a period-2 cycle on long chains once
  /// alpha exceeds about 0.75; w = 0.5 converges on the whole (0,1) range.
  double relaxation = 0.5;

  void validate() const;
};

struct ContractionCertificate {
  bool domain_ok = false;   ///< max_k |x_k - 1| < 1 / (2 alpha)
  double norm_bound = 0.0;  ///< sup-norm of the Jacobian at x
  bool contractive = false; ///< norm_bound < 1
};

enum class SolverMethod { fixed_point, newton };

/// Successive approximation from opts.x0. Throws ConvergenceError carrying
/// the last iterate if max_iter is exhausted.
EmissionVector fixed_point_solve(const ChainParams& params, const SolveOptions& opts = {});

/// Newton iteration on x - F_alpha(x) = 0 with tridiagonal linear solves.
///
/// Starting points that are mirror-symmetric (the default all-ones is) are
/// solved on the folded half-chain, which keeps the iterate exactly
/// symmetric and removes the nearly singular antisymmetric mode that long
/// even chains develop for alpha above 0.75. Steps leaving [-0.5, 1.5] are
/// halved up to 30 times. If the iteration fails, or lands on a root
/// outside (0, alpha], the solve is repeated by continuation in alpha from
/// min(alpha, 0.5).
EmissionVector newton_solve(const ChainParams& params, const SolveOptions& opts = {});

EmissionVector solve_chain(const ChainParams& params, SolverMethod method,
                           const SolveOptions& opts = {});

ContractionCertificate contraction_check(const ChainParams& params,
                                         std::span<const double> x);

}  // namespace chainfair
