#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chainfair/rng.hpp"

namespace chainfair {

enum class UpdatePolicy {
  /// One slot resamples one uniformly chosen pair.
  random_single_site,
  /// One slot visits every pair once, in a fresh random order.
  synchronous_random_order,
};

struct SimConfig {
  std::size_t n = 1;
  double alpha = 0.5;
  std::size_t steps = 1'000'000;
  /// Unset means steps / 10.
  std::optional<std::size_t> burn_in;
  std::uint64_t seed = 1;
  UpdatePolicy policy = UpdatePolicy::random_single_site;
  /// Verify the independent-set property after every slot.
  bool check_invariant = false;

  std::size_t effective_burn_in() const { return burn_in.value_or(steps / 10); }
  void validate() const;
};

/// Emission bits of one slot; 1 means the pair is emitting.
struct SlotState {
  std::vector<std::uint8_t> y;

  static SlotState idle(std::size_t n) { return {std::vector<std::uint8_t>(n, 0)}; }
  /// No two adjacent pairs emit.
  bool is_independent_set() const;
};

struct MarginalEstimate {
  std::vector<double> x_hat;
  /// Batch-means standard error, 32 batches.
  std::vector<double> std_error;
};

/// y_i <- z (1 - y_{i-1}) (1 - y_{i+1}) with idle virtual boundary pairs.
void resample_site(SlotState& state, std::size_t site, bool z);

/// One slot of the interaction process under config.policy. Throws
/// ContractError if the input is not an independent set of length n.
SlotState sim_step(const SlotState& state, const SimConfig& config, Rng& rng);

/// Time-averaged emission frequencies after burn-in, starting from all idle.
MarginalEstimate simulate(const SimConfig& config);

/// Largest chain handled by exact_stationary.
inline constexpr std::size_t kExactMaxPairs = 12;

/// Per-pair emission probabilities under the stationary law of the
/// random-single-site chain, by power iteration over all independent sets
/// of the path. Throws SizeError for n > 12.
std::vector<double> exact_stationary(std::size_t n, double alpha);

/// Sup-norm distance between exact_stationary and the mean-field solution.
double meanfield_gap(std::size_t n, double alpha);

}  // namespace chainfair
