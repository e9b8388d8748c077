#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "trcm/bandit.hpp"
#include "trcm/env.hpp"

namespace trcm {

/// Outcome of the one-shot reverse bid adjustment for one provider.
struct ResampleRecord {
  double original_bid = 0.0;
  double modified_bid = 0.0;
  bool resampled = false;
  double gamma = 0.0;
  double mu = 0.0;
  double cost_upper = 0.0;
};

/// Deterministic core of the adjustment: b~ = b + gamma (c_upper - b) when
/// `resample` is set, b~ = b otherwise.
ResampleRecord rosa_apply(double bid, double mu, double cost_upper, bool resample, double gamma);

/// Draws gamma ~ U[0, 1] and then the resample coin (probability mu), in that
/// order, so every call consumes exactly two uniforms.
ResampleRecord rosa(double bid, double mu, double cost_upper, Rng& rng);

/// P[b~ < a | b~ > b] = (a - b) / (c_upper - b) for a in [b, c_upper].
double rosa_conditional_cdf(double a, double bid, double cost_upper);

/// Reverse generic-transformation payment for one provider in one round:
/// 0 when not allocated, b when allocated without resampling, and
/// b + (c_upper - b) / mu when allocated after resampling.
double rev_gtm_payment(const ResampleRecord& record, bool allocated);

/// Upper bound b + (c_upper - b) / mu on any single-round payment.
double payment_cap(const ResampleRecord& record);

/// Structural parameters shared by all runs of an experiment.
struct MarketEnvironment {
  std::vector<Vector> thetas;
  std::vector<CostDistribution> cost_dists;
  ContextSampler contexts;
  RewardModel reward;

  std::size_t providers() const { return thetas.size(); }
  int dim() const { return contexts.dim(); }
  void validate() const;
};

struct MechanismConfig {
  std::size_t rounds = 1000;
  double mu = 0.05;
  double alpha = 0.75;
  bool resampling = true;
  SelectorOptions selector{};
  /// Keep every SelectionDecision and context (needed by instrumentation).
  bool keep_decisions = false;
};

/// True costs and the bids reported at t = 0.
struct BidProfile {
  std::vector<double> costs;
  std::vector<double> bids;
};

/// Costs drawn from each provider's law on the run's cost stream; bids = costs.
BidProfile truthful_bids(const MarketEnvironment& env, std::uint64_t run_seed);

struct RoundOutcome {
  std::size_t round = 0;
  std::optional<std::size_t> winner;  // allocated provider
  std::size_t selected = 0;           // selector's pick (may be declined)
  Branch branch = Branch::ForcedExploration;
  int stage = 1;
  double payment = 0.0;        // paid to the winner
  double winner_value = 0.0;   // expected value of the winner, 0 if none
  double realized_reward = 0.0;
  double chosen_surplus = 0.0;  // v - Psi(b~) of the winner, 0 if none
  std::optional<std::size_t> oracle;
  double oracle_surplus = 0.0;
  double clairvoyant_utility = 0.0;  // max(0, max_i v_i - Psi_i(c_i))
};

struct RunTrace {
  std::uint64_t seed = 0;
  BidProfile bids;
  std::vector<ResampleRecord> resample;
  std::vector<double> virtual_costs;  // Psi_i(b~_i)
  std::vector<RoundOutcome> rounds;
  std::vector<std::size_t> allocations;  // per provider
  std::vector<double> payments;          // per provider, summed over rounds
  std::vector<SelectionDecision> decisions;  // only with keep_decisions
  std::vector<Vector> contexts;              // only with keep_decisions

  std::size_t resample_count() const;
  /// Sum over rounds of p_i - c_i * A_i.
  double provider_utility(std::size_t provider) const;
};

/// Full mechanism run: elicit bids once, adjust each with its own resampling
/// stream, then allocate every round with the staged selector on Psi_i(b~_i)
/// and pay according to the generic transformation. Nature draws a reward for
/// every provider in every round so reward streams do not depend on the
/// allocation.
///
/// Throws std::logic_error if a truthful provider ever realizes negative utility.
RunTrace run_trcm(const MarketEnvironment& env, const MechanismConfig& config,
                  std::uint64_t run_seed, const BidProfile& bids);

RunTrace run_trcm(const MarketEnvironment& env, const MechanismConfig& config,
                  std::uint64_t run_seed);

}  // namespace trcm
