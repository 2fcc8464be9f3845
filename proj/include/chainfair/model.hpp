#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chainfair {

/// Chain of n sender-receiver pairs with emission coefficient alpha, the
/// probability that a pair emits when both neighbours are idle. Pairs 0 and
/// n+1 are virtual and never emit.
struct ChainParams {
  std::size_t n = 1;
  double alpha = 0.5;

  /// Throws DomainError unless n >= 1 and 0 < alpha < 1.
  void validate() const;
};

/// Per-pair stationary emission probabilities, index 0 is pair 1.
using EmissionVector = std::vector<double>;

/// Jacobian of the successive-approximation map. Only the two
/// off-diagonals are stored; the diagonal is identically zero.
class TriJacobian {
 public:
  TriJacobian(std::vector<double> lower, std::vector<double> upper);

  std::size_t size() const { return lower_.size(); }

  /// Entry (i, j), zero-based.
  double operator()(std::size_t i, std::size_t j) const;

  /// lower()[i] is entry (i, i-1); lower()[0] is unused and zero.
  std::span<const double> lower() const { return lower_; }
  /// upper()[i] is entry (i, i+1); upper()[n-1] is unused and zero.
  std::span<const double> upper() const { return upper_; }

  /// Maximum absolute row sum.
  double sup_norm() const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// F_alpha(x)_i = alpha (1 - x_{i-1}) (1 - x_{i+1}) with x_0 = x_{n+1} = 0.
/// The two factors are multiplied before scaling by alpha so that the map
/// commutes bit-for-bit with index reversal.
EmissionVector apply_F(const ChainParams& params, std::span<const double> x);

EmissionVector apply_F(double alpha, std::span<const double> x);

TriJacobian jacobian_F(const ChainParams& params, std::span<const double> x);

/// Sup-norm of x - F_alpha(x).
double fixed_point_residual(double alpha, std::span<const double> x);

/// E(x) = -sum x_i ln x_i with 0 ln 0 = 0. Throws DomainError if some
/// component lies outside [0, 1].
double entropy(std::span<const double> x);

/// Gradient -(ln x_i + 1). Throws DomainError if some component lies
/// outside (0, 1].
std::vector<double> grad_entropy(std::span<const double> x);

/// Closed-form stationary vector for three pairs.
EmissionVector closed_form_n3(double alpha);

/// Closed-form stationary vector for four pairs.
EmissionVector closed_form_n4(double alpha);

}  // namespace chainfair
