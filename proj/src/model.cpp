#include "chainfair/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainfair/errors.hpp"

namespace chainfair {

namespace {

void require_open_unit(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(what) + ": alpha must lie in (0,1), got " +
                      std::to_string(alpha));
  }
}

}  // namespace

void ChainParams::validate() const {
  if (n < 1) throw DomainError("ChainParams: n must be >= 1");
  require_open_unit(alpha, "ChainParams");
}

TriJacobian::TriJacobian(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw ContractError("TriJacobian: diagonal lengths differ");
  }
}

double TriJacobian::operator()(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw ContractError("TriJacobian: index out of range");
  if (j + 1 == i) return lower_[i];
  if (i + 1 == j) return upper_[i];
  return 0.0;
}

double TriJacobian::sup_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    best = std::max(best, std::abs(lower_[i]) + std::abs(upper_[i]));
  }
  return best;
}

EmissionVector apply_F(double alpha, std::span<const double> x) {
  const std::size_t n = x.size();
  EmissionVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] : 0.0;
    y[i] = alpha * ((1.0 - left) * (1.0 - right));
  }
  return y;
}

EmissionVector apply_F(const ChainParams& params, std::span<const double> x) {
  if (x.size() != params.n) {
    throw ContractError("apply_F: vector length " + std::to_string(x.size()) +
                        " does not match n = " + std::to_string(params.n));
  }
  return apply_F(params.alpha, x);
}

TriJacobian jacobian_F(const ChainParams& params, std::span<const double> x) {
  const std::size_t n = params.n;
  if (x.size() != n) throw ContractError("jacobian_F: dimension mismatch");
  std::vector<double> lower(n, 0.0);
  std::vector<double> upper(n, 0.0);
  const double a = params.alpha;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] : 0.0;
    if (i > 0) lower[i] = a * (right - 1.0);
    if (i + 1 < n) upper[i] = a * (left - 1.0);
  }
  return TriJacobian(std::move(lower), std::move(upper));
}

double fixed_point_residual(double alpha, std::span<const double> x) {
  const std::size_t n = x.size();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] : 0.0;
    r = std::max(r, std::abs(x[i] - alpha * ((1.0 - left) * (1.0 - right))));
  }
  return r;
}

double entropy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("entropy: component " + std::to_string(v) + " outside [0,1]");
    }
    if (v > 0.0) e -= v * std::log(v);
  }
  return e;
}

std::vector<double> grad_entropy(std::span<const double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!(v > 0.0 && v <= 1.0)) {
      throw DomainError("grad_entropy: component " + std::to_string(v) +
                        " outside (0,1]");
    }
    g[i] = -(std::log(v) + 1.0);
  }
  return g;
}

EmissionVector closed_form_n3(double alpha) {
  require_open_unit(alpha, "closed_form_n3");
  const double a2 = alpha * alpha;
  const double b = 1.0 - 2.0 * a2;
  const double disc = b * b - 4.0 * a2 * alpha * (alpha - 1.0);
  const double x1 = (2.0 * a2 - 1.0 + std::sqrt(disc)) / (2.0 * a2);
  const double x2 = alpha * ((1.0 - x1) * (1.0 - x1));
  return {x1, x2, x1};
}

EmissionVector closed_form_n4(double alpha) {
  require_open_unit(alpha, "closed_form_n4");
  const double x1 =
      (1.0 + alpha - std::sqrt((1.0 - alpha) * (1.0 + 3.0 * alpha))) / (2.0 * alpha);
  const double c = alpha * (1.0 - x1);
  const double x2 = c / (1.0 + c);
  return {x1, x2, x2, x1};
}

}  // namespace chainfair
