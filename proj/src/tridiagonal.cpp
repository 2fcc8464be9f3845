#include "chainfair/tridiagonal.hpp"

#include <cmath>
#include <utility>

#include "chainfair/errors.hpp"

namespace chainfair {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw ContractError("solve_tridiagonal: inconsistent sizes");
  }
  if (n == 0) return {};

  // Row i after elimination holds d[i], u1[i] (col i+1), u2[i] (col i+2).
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> u1(n, 0.0), u2(n, 0.0);
  std::vector<double> b(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i + 1 < n; ++i) u1[i] = upper[i];

  for (std::size_t i = 0; i + 1 < n; ++i) {
    double sub = lower[i + 1];
    double& dn = d[i + 1];
    double& un = u1[i + 1];
    if (std::abs(d[i]) >= std::abs(sub)) {
      if (d[i] == 0.0) throw LinearSolveError("solve_tridiagonal: singular matrix");
      const double m = sub / d[i];
      dn -= m * u1[i];
      b[i + 1] -= m * b[i];
    } else {
      // Swap rows i and i+1.
      const double m = d[i] / sub;
      d[i] = sub;
      const double old_u1 = u1[i];
      u1[i] = dn;
      dn = old_u1 - m * dn;
      if (i + 2 < n) {
        u2[i] = un;
        un = -m * un;
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= m * b[i];
    }
  }
  if (d[n - 1] == 0.0) throw LinearSolveError("solve_tridiagonal: singular matrix");

  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    if (k + 1 < n) s -= u1[k] * x[k + 1];
    if (k + 2 < n) s -= u2[k] * x[k + 2];
    x[k] = s / d[k];
    if (!std::isfinite(x[k])) {
      throw LinearSolveError("solve_tridiagonal: non-finite solution");
    }
  }
  return x;
}

}  // namespace chainfair
