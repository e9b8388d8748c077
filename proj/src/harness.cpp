#include "trcm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "trcm/error.hpp"
#include "trcm/oracle.hpp"

namespace trcm {

std::optional<std::size_t> oracle_choice(std::span<const double> values,
                                         std::span<const double> virtual_costs) {
  if (values.size() != virtual_costs.size()) {
    throw ValidationError("values and virtual costs differ in length");
  }
  std::optional<std::size_t> best;
  double best_surplus = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double surplus = values[i] - virtual_costs[i];
    if (surplus >= 0.0 && (!best || surplus > best_surplus)) {
      best = i;
      best_surplus = surplus;
    }
  }
  return best;
}

namespace {

std::vector<double> linear_values(std::span<const Vector> thetas, const Vector& x) {
  std::vector<double> values;
  values.reserve(thetas.size());
  for (const auto& theta : thetas) values.push_back(expected_value(theta, x));
  return values;
}

}  // namespace

std::optional<std::size_t> oracle_choice(std::span<const Vector> thetas, const Vector& x,
                                         std::span<const double> virtual_costs) {
  return oracle_choice(linear_values(thetas, x), virtual_costs);
}

double instantaneous_regret(std::span<const double> values,
                            std::span<const double> virtual_costs,
                            std::optional<std::size_t> chosen) {
  const auto best = oracle_choice(values, virtual_costs);
  const double oracle_surplus = best ? values[*best] - virtual_costs[*best] : 0.0;
  double chosen_surplus = 0.0;
  if (chosen) {
    if (*chosen >= values.size()) throw ValidationError("chosen provider out of range");
    chosen_surplus = values[*chosen] - virtual_costs[*chosen];
  }
  return oracle_surplus - chosen_surplus;
}

double instantaneous_regret(std::span<const Vector> thetas, const Vector& x,
                            std::span<const double> virtual_costs,
                            std::optional<std::size_t> chosen) {
  return instantaneous_regret(linear_values(thetas, x), virtual_costs, chosen);
}

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ValidationError("rounds must be >= 1");
  if (seeds < 1) throw ValidationError("seeds must be >= 1");
  if (providers < 1) throw ValidationError("providers must be >= 1");
  if (rounds < providers) throw ValidationError("rounds must be >= providers");
  if (dim < 1) throw ValidationError("dim must be >= 1");
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu must lie in (0, 1)");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (noise_sigma < 0.0) throw ValidationError("noise sigma must be >= 0");
  if (bid_scale < 0.0) throw ValidationError("bid scale must be >= 0");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (!(theta_scale >= 0.0)) throw ValidationError("theta scale must be >= 0");
}

RewardModel reward_model(const ExperimentConfig& config) {
  return config.reward == RewardModel::Kind::GaussianLinear
             ? RewardModel::gaussian(config.noise_sigma)
             : RewardModel::exponential();
}

MechanismConfig mechanism_config(const ExperimentConfig& config) {
  MechanismConfig mc;
  mc.rounds = config.rounds;
  mc.mu = config.mu;
  mc.alpha = config.alpha;
  mc.selector.participation_floor = config.participation_floor;
  return mc;
}

MarketEnvironment make_environment(const ExperimentConfig& config) {
  config.validate();
  Rng rng = make_rng(config.structural_seed, streams::kStructure);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> thetas;
  std::vector<CostDistribution> costs;
  for (std::size_t i = 0; i < config.providers; ++i) {
    Vector theta(config.dim);
    for (int k = 0; k < config.dim; ++k) theta[k] = config.theta_scale * normal(rng);
    thetas.push_back(std::move(theta));
    const double lo = 0.05 * static_cast<double>(i + 1);
    const double hi = lo + 0.5;
    if (config.cost_family == CostFamily::Uniform) {
      costs.push_back(CostDistribution::uniform(lo, hi));
    } else {
      costs.push_back(CostDistribution::lognormal_truncated(std::log(0.5 * (lo + hi)), 0.4, lo, hi));
    }
  }
  MarketEnvironment env{std::move(thetas), std::move(costs),
                        ContextSampler(config.dim, config.diag_scale, config.offdiag_corr),
                        reward_model(config)};
  env.validate();
  return env;
}

BidProfile elicit_bids(const ExperimentConfig& config, const MarketEnvironment& env,
                       std::uint64_t run_seed) {
  BidProfile profile = truthful_bids(env, run_seed);
  if (config.bid_source == BidSource::Truthful) return profile;
  Rng structure = make_rng(config.structural_seed, streams::kBid);
  const auto model =
      AffineLogNormalBidModel::generate(env.cost_dists, env.dim(), config.bid_scale, structure);
  Rng rng = make_rng(run_seed, streams::kBid);
  const Vector x0 = env.contexts.sample(rng);
  for (std::size_t i = 0; i < env.providers(); ++i) {
    const auto& dist = env.cost_dists[i];
    profile.bids[i] = model.sample_bid(i, x0, dist.lo(), dist.hi(), rng);
  }
  return profile;
}

RunMetrics compute_metrics(const RunTrace& trace) {
  RunMetrics m;
  m.seed = trace.seed;
  const std::size_t n = trace.rounds.size();
  m.winner.reserve(n);
  m.branch.reserve(n);
  m.payment.reserve(n);
  m.instantaneous_regret.reserve(n);
  m.cumulative_regret.reserve(n);
  m.user_utility.reserve(n);
  m.clairvoyant_utility.reserve(n);
  double cumulative = 0.0;
  for (const RoundOutcome& r : trace.rounds) {
    m.winner.push_back(r.winner ? static_cast<long>(*r.winner) : -1L);
    m.branch.push_back(r.branch);
    m.payment.push_back(r.payment);
    // Oracle maximizes the same surplus, so this is >= 0 up to rounding.
    const double regret = std::max(0.0, r.oracle_surplus - r.chosen_surplus);
    m.instantaneous_regret.push_back(regret);
    cumulative += regret;
    m.cumulative_regret.push_back(cumulative);
    const double utility = r.winner ? r.winner_value - r.payment : 0.0;
    m.user_utility.push_back(utility);
    m.clairvoyant_utility.push_back(r.clairvoyant_utility);
    m.total_utility += utility;
    m.total_payments += r.payment;
  }
  m.total_regret = cumulative;
  m.resample_count = trace.resample_count();
  return m;
}

ExperimentResult aggregate(std::vector<RunMetrics> runs) {
  ExperimentResult result;
  if (runs.empty()) throw ValidationError("nothing to aggregate");
  const std::size_t n = runs.front().rounds();
  for (const auto& run : runs) {
    if (run.rounds() != n) throw ValidationError("runs differ in length");
  }
  result.mean_cum_regret.assign(n, 0.0);
  result.mean_round_regret.assign(n, 0.0);
  result.mean_user_utility.assign(n, 0.0);
  result.mean_clairvoyant_utility.assign(n, 0.0);
  for (const auto& run : runs) {
    double user = 0.0;
    double clairvoyant = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      user += run.user_utility[t];
      clairvoyant += run.clairvoyant_utility[t];
      result.mean_cum_regret[t] += run.cumulative_regret[t];
      result.mean_round_regret[t] += run.instantaneous_regret[t];
      result.mean_user_utility[t] += user;
      result.mean_clairvoyant_utility[t] += clairvoyant;
    }
  }
  const double scale = 1.0 / static_cast<double>(runs.size());
  for (std::size_t t = 0; t < n; ++t) {
    result.mean_cum_regret[t] *= scale;
    result.mean_round_regret[t] *= scale;
    result.mean_user_utility[t] *= scale;
    result.mean_clairvoyant_utility[t] *= scale;
  }
  result.runs = std::move(runs);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const MarketEnvironment env = make_environment(config);
  const MechanismConfig mc = mechanism_config(config);

  std::vector<RunMetrics> runs(config.seeds);
  auto run_one = [&](std::size_t k) {
    const std::uint64_t seed = config.base_seed + k;
    runs[k] = compute_metrics(run_trcm(env, mc, seed, elicit_bids(config, env, seed)));
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config.threads, config.seeds));
  if (workers <= 1) {
    for (std::size_t k = 0; k < config.seeds; ++k) run_one(k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t k = w; k < config.seeds; k += workers) run_one(k);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentResult result = aggregate(std::move(runs));
  if (!config.output_dir.empty()) write_outputs(result, config.output_dir);
  return result;
}

}  // namespace trcm
