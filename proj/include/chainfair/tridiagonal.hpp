#pragma once

#include <span>
#include <vector>

namespace chainfair {

/// Solves A x = b for tridiagonal A by Gaussian elimination with partial
/// pivoting (the dgtsv scheme). lower[i] is A(i, i-1) with lower[0] ignored,
/// upper[i] is A(i, i+1) with upper[n-1] ignored. O(n).
/// Throws LinearSolveError on an exactly singular pivot or non-finite result.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

}  // namespace chainfair
