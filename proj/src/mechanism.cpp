#include "trcm/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trcm/error.hpp"
#include "trcm/oracle.hpp"

namespace trcm {

namespace {

void check_rosa_inputs(double bid, double mu, double cost_upper) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw ValidationError("resampling probability must lie in (0, 1), got " + std::to_string(mu));
  }
  if (!(bid >= 0.0) || !(bid <= cost_upper)) {
    std::ostringstream msg;
    msg << "bid " << bid << " outside [0, " << cost_upper << "]";
    throw ValidationError(msg.str());
  }
}

}  // namespace

ResampleRecord rosa_apply(double bid, double mu, double cost_upper, bool resample, double gamma) {
  check_rosa_inputs(bid, mu, cost_upper);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in [0, 1]");
  ResampleRecord rec;
  rec.original_bid = bid;
  rec.resampled = resample;
  rec.gamma = gamma;
  rec.mu = mu;
  rec.cost_upper = cost_upper;
  rec.modified_bid = resample ? bid + gamma * (cost_upper - bid) : bid;
  return rec;
}

ResampleRecord rosa(double bid, double mu, double cost_upper, Rng& rng) {
  check_rosa_inputs(bid, mu, cost_upper);
  const double gamma = uniform01(rng);
  const bool resample = uniform01(rng) < mu;
  return rosa_apply(bid, mu, cost_upper, resample, gamma);
}

double rosa_conditional_cdf(double a, double bid, double cost_upper) {
  if (!(bid < cost_upper)) throw ValidationError("conditional CDF needs bid < cost upper bound");
  if (!(a >= bid && a <= cost_upper)) throw ValidationError("evaluation point outside [bid, upper]");
  return (a - bid) / (cost_upper - bid);
}

double rev_gtm_payment(const ResampleRecord& record, bool allocated) {
  if (!allocated) return 0.0;
  if (!record.resampled) return record.original_bid;
  return record.original_bid + (record.cost_upper - record.original_bid) / record.mu;
}

double payment_cap(const ResampleRecord& record) {
  return record.original_bid + (record.cost_upper - record.original_bid) / record.mu;
}

void MarketEnvironment::validate() const {
  if (thetas.empty()) throw ValidationError("environment needs at least one provider");
  if (cost_dists.size() != thetas.size()) {
    throw ValidationError("one cost law per provider is required");
  }
  for (const auto& theta : thetas) {
    if (theta.size() != dim()) throw ValidationError("theta length differs from context dimension");
    if (!theta.allFinite()) throw ValidationError("theta has non-finite entries");
  }
}

BidProfile truthful_bids(const MarketEnvironment& env, std::uint64_t run_seed) {
  Rng rng = make_rng(run_seed, streams::kCost);
  BidProfile profile;
  for (const auto& dist : env.cost_dists) profile.costs.push_back(dist.sample(rng));
  profile.bids = profile.costs;
  return profile;
}

std::size_t RunTrace::resample_count() const {
  return static_cast<std::size_t>(
      std::count_if(resample.begin(), resample.end(), [](const auto& r) { return r.resampled; }));
}

double RunTrace::provider_utility(std::size_t provider) const {
  return payments.at(provider) - bids.costs.at(provider) * static_cast<double>(allocations.at(provider));
}

RunTrace run_trcm(const MarketEnvironment& env, const MechanismConfig& config,
                  std::uint64_t run_seed) {
  return run_trcm(env, config, run_seed, truthful_bids(env, run_seed));
}

RunTrace run_trcm(const MarketEnvironment& env, const MechanismConfig& config,
                  std::uint64_t run_seed, const BidProfile& bids) {
  env.validate();
  const std::size_t m = env.providers();
  if (config.rounds == 0) throw ValidationError("rounds must be >= 1");
  if (bids.costs.size() != m || bids.bids.size() != m) {
    throw ValidationError("bid profile must cover every provider");
  }
  if (!(config.mu > 0.0 && config.mu < 1.0)) {
    throw ValidationError("resampling probability must lie in (0, 1)");
  }

  RunTrace trace;
  trace.seed = run_seed;
  trace.bids = bids;
  trace.allocations.assign(m, 0);
  trace.payments.assign(m, 0.0);
  trace.rounds.reserve(config.rounds);

  std::vector<bool> truthful(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& dist = env.cost_dists[i];
    if (!dist.contains(bids.costs[i])) throw ValidationError("true cost outside cost support");
    if (!dist.contains(bids.bids[i])) {
      std::ostringstream msg;
      msg << "bid " << bids.bids[i] << " of provider " << i << " outside its support";
      throw ValidationError(msg.str());
    }
    truthful[i] = bids.bids[i] == bids.costs[i];

    Rng resample_rng = make_rng(run_seed, streams::kResampleBase + i);
    ResampleRecord rec = rosa(bids.bids[i], config.mu, dist.hi(), resample_rng);
    if (!config.resampling) rec = rosa_apply(bids.bids[i], config.mu, dist.hi(), false, rec.gamma);
    trace.resample.push_back(rec);
    trace.virtual_costs.push_back(dist.virtual_cost(rec.modified_bid));
  }

  std::vector<double> true_virtual_costs(m);
  for (std::size_t i = 0; i < m; ++i) {
    true_virtual_costs[i] = env.cost_dists[i].virtual_cost(bids.costs[i]);
  }

  SupLinUcbSelector selector(m, env.dim(), config.rounds, config.alpha, config.selector);
  Rng context_rng = make_rng(run_seed, streams::kContext);
  Rng reward_rng = make_rng(run_seed, streams::kReward);
  std::vector<double> values(m);
  std::vector<double> rewards(m);

  for (std::size_t t = 1; t <= config.rounds; ++t) {
    const Vector x = env.contexts.sample(context_rng);
    for (std::size_t i = 0; i < m; ++i) {
      values[i] = mean_reward(env.reward, env.thetas[i], x);
      rewards[i] = sample_reward(env.reward, env.thetas[i], x, reward_rng);
    }

    SelectionDecision decision = selector.select(x, trace.virtual_costs, t);
    const std::size_t pick = decision.winner;
    selector.record(decision, t, x, rewards[pick]);

    RoundOutcome out;
    out.round = t;
    out.selected = pick;
    out.branch = decision.branch;
    out.stage = decision.stage;
    if (decision.allocated) {
      out.winner = pick;
      out.payment = rev_gtm_payment(trace.resample[pick], true);
      out.winner_value = values[pick];
      out.realized_reward = rewards[pick];
      out.chosen_surplus = values[pick] - trace.virtual_costs[pick];
      trace.allocations[pick] += 1;
      trace.payments[pick] += out.payment;
      if (truthful[pick] && out.payment - bids.costs[pick] < 0.0) {
        throw std::logic_error("individual rationality violated for a truthful provider in round " +
                               std::to_string(t));
      }
    }
    out.oracle = oracle_choice(values, trace.virtual_costs);
    if (out.oracle) out.oracle_surplus = values[*out.oracle] - trace.virtual_costs[*out.oracle];
    double clairvoyant = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      clairvoyant = std::max(clairvoyant, values[i] - true_virtual_costs[i]);
    }
    out.clairvoyant_utility = clairvoyant;
    trace.rounds.push_back(out);

    if (config.keep_decisions) {
      trace.decisions.push_back(std::move(decision));
      trace.contexts.push_back(x);
    }
  }
  return trace;
}

}  // namespace trcm
