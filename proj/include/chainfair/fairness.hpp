#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainfair/model.hpp"
#include "chainfair/solver.hpp"

namespace chainfair {

/// Lagrange multipliers of the entropy objective under x = F_alpha(x).
struct AdjointState {
  std::vector<double> lambda;
  /// Sup-norm residual of the adjoint linear system at the returned lambda.
  double residual = 0.0;
};

struct OptResult {
  double alpha_hat = 0.0;
  double J_value = 0.0;
  std::size_t evaluations = 0;
  /// Width of the final bracket around alpha_hat.
  double bracket = 0.0;
  /// Sign changes of J' seen on the 99-point scan of [0.01, 0.99].
  std::size_t sign_changes = 0;
  /// False when the scan did not show exactly one +/- change of J'. In that
  /// case alpha_hat is the best scan point and bracket is the grid spacing.
  bool unimodal = true;
};

struct SweepRow {
  double alpha = 0.0;
  double J = 0.0;
  bool ok = true;
  std::string error;
};

/// J(alpha) = E(x(alpha)) / n.
double fairness_objective(double alpha, std::size_t n,
                          SolverMethod method = SolverMethod::newton);

/// Multipliers lambda solving (F'(x) - I)^T lambda = grad E(x) / n.
AdjointState adjoint_state(const ChainParams& params, std::span<const double> x);

/// dJ/dalpha by the adjoint-state method: -(1/alpha) lambda^T F_alpha(x).
double fairness_gradient(double alpha, std::size_t n);

/// Maximizes J over [0.01, 0.99]: a 99-point scan of J' checks unimodality,
/// golden-section search narrows the interval, bisection on the sign of J'
/// finishes to tol_alpha.
OptResult maximize_fairness(std::size_t n, double tol_alpha = 1e-6);

/// J on each alpha, in input order. Solver failures mark the row instead of
/// aborting the sweep.
std::vector<SweepRow> sweep_fairness(std::size_t n, const std::vector<double>& alphas);

}  // namespace chainfair
