#include "chainfair/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chainfair/errors.hpp"
#include "chainfair/solver.hpp"

namespace chainfair {

namespace {

constexpr std::size_t kBatches = 32;
constexpr double kPowerTol = 1e-13;
constexpr std::size_t kPowerMaxIter = 50'000'000;

void check_state(const SlotState& state, std::size_t n) {
  if (state.y.size() != n) throw ContractError("sim_step: state length does not match n");
  if (!state.is_independent_set()) {
    throw ContractError("sim_step: state has two adjacent emitting pairs");
  }
}

void advance(SlotState& state, const SimConfig& config, Rng& rng,
             std::vector<std::size_t>& order) {
  const std::size_t n = config.n;
  if (config.policy == UpdatePolicy::random_single_site) {
    const auto site = static_cast<std::size_t>(uniform_index(rng, n));
    resample_site(state, site, bernoulli(rng, config.alpha));
    return;
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  for (std::size_t site : order) resample_site(state, site, bernoulli(rng, config.alpha));
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw DomainError("SimConfig: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("SimConfig: alpha must lie in (0,1)");
  const std::size_t burn = effective_burn_in();
  if (burn >= steps) throw DomainError("SimConfig: burn_in must be < steps");
  if (steps - burn < kBatches) {
    throw DomainError("SimConfig: need at least 32 slots after burn-in");
  }
}

bool SlotState::is_independent_set() const {
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    if (y[i] > 1 || (y[i] && y[i + 1])) return false;
  }
  return y.empty() || y.back() <= 1;
}

void resample_site(SlotState& state, std::size_t site, bool z) {
  const std::size_t n = state.y.size();
  if (site >= n) throw ContractError("resample_site: site out of range");
  const bool left_busy = site > 0 && state.y[site - 1];
  const bool right_busy = site + 1 < n && state.y[site + 1];
  state.y[site] = (z && !left_busy && !right_busy) ? 1 : 0;
}

SlotState sim_step(const SlotState& state, const SimConfig& config, Rng& rng) {
  check_state(state, config.n);
  SlotState next = state;
  std::vector<std::size_t> order(config.n);
  advance(next, config, rng, order);
  return next;
}

MarginalEstimate simulate(const SimConfig& config) {
  config.validate();
  const std::size_t n = config.n;
  const std::size_t burn = config.effective_burn_in();
  const std::size_t measured = config.steps - burn;
  const std::size_t batch_len = measured / kBatches;

  Rng rng = make_rng(config.seed);
  SlotState state = SlotState::idle(n);
  std::vector<std::size_t> order(n);
  std::vector<std::uint64_t> total(n, 0);
  std::vector<std::uint64_t> batch(n, 0);
  std::vector<std::vector<double>> batch_means(n);

  for (std::size_t t = 0; t < config.steps; ++t) {
    advance(state, config, rng, order);
    if (config.check_invariant && !state.is_independent_set()) {
      throw ContractError("simulate: independent-set property violated at slot " +
                          std::to_string(t));
    }
    if (t < burn) continue;
    for (std::size_t i = 0; i < n; ++i) {
      total[i] += state.y[i];
      batch[i] += state.y[i];
    }
    const std::size_t k = t - burn + 1;
    if (k % batch_len == 0 && k / batch_len <= kBatches) {
      for (std::size_t i = 0; i < n; ++i) {
        batch_means[i].push_back(static_cast<double>(batch[i]) /
                                 static_cast<double>(batch_len));
        batch[i] = 0;
      }
    }
  }

  MarginalEstimate est;
  est.x_hat.resize(n);
  est.std_error.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    est.x_hat[i] = static_cast<double>(total[i]) / static_cast<double>(measured);
    const auto& bm = batch_means[i];
    const double mean = std::accumulate(bm.begin(), bm.end(), 0.0) / kBatches;
    double ss = 0.0;
    for (double v : bm) ss += (v - mean) * (v - mean);
    est.std_error[i] = std::sqrt(ss / static_cast<double>(kBatches - 1) / kBatches);
  }
  return est;
}

std::vector<double> exact_stationary(std::size_t n, double alpha) {
  if (n < 1) throw DomainError("exact_stationary: n must be >= 1");
  if (n > kExactMaxPairs) {
    throw SizeError("exact_stationary: n = " + std::to_string(n) + " exceeds " +
                    std::to_string(kExactMaxPairs));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("exact_stationary: alpha must lie in (0,1)");

  // States are bitmasks with no two adjacent bits set.
  std::vector<std::uint32_t> states;
  std::vector<std::int32_t> index(std::size_t{1} << n, -1);
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if ((s & (s >> 1)) == 0) {
      index[s] = static_cast<std::int32_t>(states.size());
      states.push_back(s);
    }
  }
  const std::size_t m = states.size();

  // Sparse kernel: from each state, choosing site i (prob 1/n) leads to the
  // state with bit i set (prob alpha, only if both neighbours are idle) or
  // cleared (the remaining mass).
  struct Move {
    std::uint32_t to;
    double p;
  };
  std::vector<std::vector<Move>> moves(m);
  const double pick = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t s = states[k];
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      const bool free = (s & ((bit << 1) | (bit >> 1))) == 0;
      const auto off = static_cast<std::uint32_t>(index[s & ~bit]);
      if (free) {
        const auto on = static_cast<std::uint32_t>(index[s | bit]);
        moves[k].push_back({on, pick * alpha});
        moves[k].push_back({off, pick * (1.0 - alpha)});
      } else {
        moves[k].push_back({off, pick});
      }
    }
  }

  std::vector<double> pi(m, 1.0 / static_cast<double>(m));
  std::vector<double> next(m);
  bool converged = false;
  double delta = 0.0;
  for (std::size_t it = 0; it < kPowerMaxIter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (const Move& mv : moves[k]) next[mv.to] += pi[k] * mv.p;
    }
    delta = 0.0;
    for (std::size_t k = 0; k < m; ++k) delta += std::abs(next[k] - pi[k]);
    pi.swap(next);
    if (delta <= kPowerTol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("exact_stationary: power iteration did not converge", pi, delta);
  }

  std::vector<double> marginal(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (states[k] & (1u << i)) marginal[i] += pi[k];
    }
  }
  return marginal;
}

double meanfield_gap(std::size_t n, double alpha) {
  const std::vector<double> exact = exact_stationary(n, alpha);
  const EmissionVector mf = newton_solve({n, alpha});
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(exact[i] - mf[i]));
  return gap;
}

}  // namespace chainfair
