#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chainfair {

/// Common emission probability of every pair on a borderless ring.
struct RingSolution {
  double x = 0.0;
};

/// Root in [0, 1) of x = alpha (1 - x)^2, for 0 < alpha <= 1.
RingSolution ring_fixed_point(double alpha);

/// x / (1 - x)^2, the alpha whose ring solution is x. 0 <= x < 1.
double alpha_for_ring_prob(double x);

struct FlatValue {
  double alpha_hat = 0.0;
  /// Solved component at pair ceil(n/2).
  double central_prob = 0.0;
};

/// Optimal alpha for n pairs and the central emission probability there.
FlatValue flat_value(std::size_t n);

struct CurveRow {
  std::size_t n = 0;
  double alpha_hat = 0.0;
};

std::vector<CurveRow> optimal_alpha_curve(const std::vector<std::size_t>& ns);

/// Monte Carlo of the uniform-backoff contest on a circle: each trial draws
/// u_i ~ U[0,1) per pair and pair i wins if u_i is strictly below both
/// cyclic neighbours. Returns per-pair win frequencies. Deterministic in
/// seed.
std::vector<double> circle_backoff_mc(std::size_t n_pairs, std::size_t trials,
                                      std::uint64_t seed);

}  // namespace chainfair
