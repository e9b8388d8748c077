#include "trcm/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "trcm/error.hpp"
#include "trcm/oracle.hpp"

namespace trcm {

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::string fixed(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

MechanismConfig bare_config(const ExperimentConfig& config) {
  MechanismConfig mc = mechanism_config(config);
  mc.resampling = false;
  return mc;
}

}  // namespace

std::string AuditReport::to_csv() const {
  std::string out = "trial";
  for (const auto& c : columns) out += "," + c;
  out += '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out += std::to_string(k);
    for (double v : rows[k]) out += "," + format_double(v);
    out += '\n';
  }
  out += "summary,check=" + check + ",trials=" + std::to_string(trials) +
         ",violations=" + std::to_string(violations) + ",worst_margin=" +
         format_double(worst_margin) + ",standard_error=" + format_double(standard_error) +
         ",pass=" + (pass ? "1" : "0") + '\n';
  return out;
}

std::string AuditReport::summary_line() const {
  std::ostringstream s;
  s << (pass ? "PASS " : "FAIL ") << check << ": trials=" << trials
    << " violations=" << violations << " worst_margin=" << fixed(worst_margin)
    << " se=" << fixed(standard_error);
  if (!detail.empty()) s << " (" << detail << ")";
  return s.str();
}

// ---------------------------------------------------------------------------

AuditReport monotonicity_probe(const ExperimentConfig& config, std::size_t provider,
                               double bid_low, double bid_high, std::size_t n_seeds) {
  const MarketEnvironment env = make_environment(config);
  if (provider >= env.providers()) throw ValidationError("probe provider out of range");
  const auto& dist = env.cost_dists[provider];
  if (!(bid_low <= bid_high) || !dist.contains(bid_low) || !dist.contains(bid_high)) {
    throw ValidationError("probe bids must satisfy lo <= bid_low <= bid_high <= hi");
  }
  const MechanismConfig mc = bare_config(config);

  AuditReport report;
  report.check = "monotonicity";
  report.columns = {"seed", "provider", "bid_low", "bid_high", "alloc_low", "alloc_high",
                    "violating_rounds", "learning_mismatches"};
  report.worst_margin = std::numeric_limits<double>::infinity();
  std::size_t learning_mismatches = 0;
  for (std::size_t k = 0; k < n_seeds; ++k) {
    const std::uint64_t seed = config.base_seed + k;
    BidProfile low = truthful_bids(env, seed);
    BidProfile high = low;
    low.bids[provider] = bid_low;
    high.bids[provider] = bid_high;
    const RunTrace a = run_trcm(env, mc, seed, low);
    const RunTrace b = run_trcm(env, mc, seed, high);

    std::size_t violating = 0;
    std::size_t mismatched = 0;
    long count_low = 0;
    long count_high = 0;
    for (std::size_t t = 0; t < a.rounds.size(); ++t) {
      const RoundOutcome& ra = a.rounds[t];
      const RoundOutcome& rb = b.rounds[t];
      if (ra.winner == provider) ++count_low;
      if (rb.winner == provider) ++count_high;
      if (count_low < count_high) ++violating;
      report.worst_margin = std::min(report.worst_margin, static_cast<double>(count_low - count_high));
      const bool fa = ra.branch == Branch::ForcedExploration;
      const bool fb = rb.branch == Branch::ForcedExploration;
      if (fa != fb || (fa && (ra.selected != rb.selected || ra.stage != rb.stage))) ++mismatched;
    }
    report.violations += violating;
    learning_mismatches += mismatched;
    report.rows.push_back({static_cast<double>(seed), static_cast<double>(provider), bid_low,
                           bid_high, static_cast<double>(count_low),
                           static_cast<double>(count_high), static_cast<double>(violating),
                           static_cast<double>(mismatched)});
  }
  report.trials = n_seeds;
  report.pass = report.violations == 0;
  report.detail = "learning_mismatch_rounds=" + std::to_string(learning_mismatches);
  return report;
}

AuditReport monotonicity_sweep(const ExperimentConfig& config, std::size_t n_probes) {
  const MarketEnvironment env = make_environment(config);
  Rng rng = make_rng(config.base_seed, streams::kBid);
  AuditReport total;
  total.check = "monotonicity";
  total.worst_margin = std::numeric_limits<double>::infinity();
  std::size_t learning_mismatches = 0;
  for (std::size_t k = 0; k < n_probes; ++k) {
    const std::size_t provider = static_cast<std::size_t>(rng() % env.providers());
    const auto& dist = env.cost_dists[provider];
    double u1 = dist.quantile(uniform01(rng));
    double u2 = dist.quantile(uniform01(rng));
    if (u1 > u2) std::swap(u1, u2);
    ExperimentConfig probe = config;
    probe.base_seed = config.base_seed + k;
    AuditReport one = monotonicity_probe(probe, provider, u1, u2, 1);
    total.columns = one.columns;
    total.rows.push_back(one.rows.front());
    total.violations += one.violations;
    total.worst_margin = std::min(total.worst_margin, one.worst_margin);
    learning_mismatches += static_cast<std::size_t>(one.rows.front().back());
  }
  total.trials = n_probes;
  total.pass = total.violations == 0;
  total.detail = "learning_mismatch_rounds=" + std::to_string(learning_mismatches);
  return total;
}

// ---------------------------------------------------------------------------

AuditReport epic_estimate(const ExperimentConfig& config, std::size_t provider,
                          const std::vector<double>& true_costs,
                          const std::vector<double>& bid_grid, std::size_t n_trials) {
  const MarketEnvironment env = make_environment(config);
  if (provider >= env.providers()) throw ValidationError("EPIC provider out of range");
  if (true_costs.size() != env.providers()) throw ValidationError("one true cost per provider");
  if (bid_grid.empty()) throw ValidationError("empty bid grid");
  const auto& dist = env.cost_dists[provider];
  for (double b : bid_grid) {
    if (!dist.contains(b)) throw ValidationError("bid grid point " + fixed(b) + " outside support");
  }
  const auto truthful_it = std::find(bid_grid.begin(), bid_grid.end(), true_costs[provider]);
  if (truthful_it == bid_grid.end()) throw ValidationError("bid grid must contain the true cost");
  const std::size_t truthful = static_cast<std::size_t>(truthful_it - bid_grid.begin());
  const MechanismConfig mc = mechanism_config(config);

  AuditReport report;
  report.check = "epic";
  for (double b : bid_grid) report.columns.push_back("utility_bid_" + format_double(b));
  std::vector<std::vector<double>> utilities(bid_grid.size(), std::vector<double>(n_trials));
  for (std::size_t k = 0; k < n_trials; ++k) {
    const std::uint64_t seed = config.base_seed + k;
    std::vector<double> row;
    for (std::size_t g = 0; g < bid_grid.size(); ++g) {
      BidProfile profile{true_costs, true_costs};
      profile.bids[provider] = bid_grid[g];
      const RunTrace trace = run_trcm(env, mc, seed, profile);
      utilities[g][k] = trace.provider_utility(provider);
      row.push_back(utilities[g][k]);
    }
    report.rows.push_back(std::move(row));
  }

  const MeanSe truth = mean_se(utilities[truthful]);
  report.worst_margin = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  detail << "truthful_mean=" << fixed(truth.mean);
  for (std::size_t g = 0; g < bid_grid.size(); ++g) {
    if (g == truthful) continue;
    const MeanSe dev = mean_se(utilities[g]);
    // Positive margin: truthful beats the deviation by that many of its SEs.
    const double slack = truth.mean - (dev.mean - 2.0 * dev.se);
    if (slack < 0.0) ++report.violations;
    const double margin = dev.se > 0.0 ? (truth.mean - dev.mean) / dev.se
                                       : (truth.mean >= dev.mean ? 0.0 : -1.0);
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.standard_error = dev.se;
    }
    std::vector<double> diff(n_trials);
    for (std::size_t k = 0; k < n_trials; ++k) diff[k] = utilities[g][k] - utilities[truthful][k];
    const MeanSe paired = mean_se(diff);
    detail << "; bid=" << fixed(bid_grid[g]) << " mean=" << fixed(dev.mean)
           << " se=" << fixed(dev.se) << " paired_gain=" << fixed(paired.mean)
           << " paired_se=" << fixed(paired.se);
  }
  if (bid_grid.size() == 1) report.worst_margin = 0.0;
  report.trials = n_trials;
  report.pass = report.violations == 0;
  report.detail = detail.str();
  return report;
}

AuditReport epir_check(const RunTrace& trace) {
  AuditReport report;
  report.check = "epir";
  report.trials = 1;
  report.columns = {"seed", "rounds", "violations", "min_utility"};
  const std::size_t m = trace.bids.costs.size();
  double min_utility = std::numeric_limits<double>::infinity();
  for (const RoundOutcome& r : trace.rounds) {
    for (std::size_t i = 0; i < m; ++i) {
      if (trace.bids.bids[i] != trace.bids.costs[i]) continue;
      const bool won = r.winner == i;
      const double utility = won ? r.payment - trace.bids.costs[i] : 0.0;
      min_utility = std::min(min_utility, utility);
      if (utility < 0.0) ++report.violations;
    }
  }
  if (!std::isfinite(min_utility)) min_utility = 0.0;
  report.worst_margin = min_utility;
  report.rows.push_back({static_cast<double>(trace.seed), static_cast<double>(trace.rounds.size()),
                         static_cast<double>(report.violations), min_utility});
  report.pass = report.violations == 0;
  return report;
}

AuditReport epir_sweep(const ExperimentConfig& config) {
  const MarketEnvironment env = make_environment(config);
  const MechanismConfig mc = mechanism_config(config);
  AuditReport total;
  total.check = "epir";
  total.columns = {"seed", "rounds", "violations", "min_utility"};
  total.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < config.seeds; ++k) {
    const std::uint64_t seed = config.base_seed + k;
    const AuditReport one = epir_check(run_trcm(env, mc, seed));
    total.rows.push_back(one.rows.front());
    total.violations += one.violations;
    total.worst_margin = std::min(total.worst_margin, one.worst_margin);
  }
  total.trials = config.seeds;
  total.pass = total.violations == 0;
  return total;
}

// ---------------------------------------------------------------------------

AuditReport payment_identity_check(const std::function<bool(double)>& allocation, double bid,
                                   double cost_upper, double mu, std::size_t n_samples,
                                   std::uint64_t seed) {
  if (n_samples == 0) throw ValidationError("payment identity needs samples");
  constexpr std::size_t kQuadraturePoints = 10000;
  AuditReport report;
  report.check = "payment-identity";
  report.trials = n_samples;
  report.columns = {"bid", "cost_upper", "mu", "mc_extra_payment", "quadrature", "relative_error"};

  const double width = cost_upper - bid;
  double integral = 0.0;
  if (width > 0.0) {
    const double h = width / static_cast<double>(kQuadraturePoints);
    for (std::size_t k = 0; k < kQuadraturePoints; ++k) {
      if (allocation(bid + (static_cast<double>(k) + 0.5) * h)) integral += h;
    }
  }

  Rng rng(seed);
  std::vector<double> extra(n_samples, 0.0);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const ResampleRecord rec = rosa(bid, mu, cost_upper, rng);
    if (rec.resampled && allocation(rec.modified_bid)) extra[k] = width / mu;
  }
  const MeanSe est = mean_se(extra);
  report.standard_error = est.se;

  double rel = 0.0;
  if (integral == 0.0) {
    rel = est.mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    rel = std::abs(est.mean - integral) / integral;
  }
  report.worst_margin = rel;
  report.violations = rel <= 0.05 ? 0 : 1;
  report.pass = report.violations == 0;
  report.rows.push_back({bid, cost_upper, mu, est.mean, integral, rel});
  report.detail = "mc=" + fixed(est.mean) + " integral=" + fixed(integral);
  return report;
}

bool FrozenAllocation::operator()(double bid) const {
  std::vector<double> psi = virtual_costs;
  psi[provider] = own_cost.virtual_cost(bid);
  const SelectionDecision d = selector.select(context, psi, round);
  return d.allocated && d.winner == provider;
}

namespace {

/// Learner state after `played` rounds of a truthful, resampling-free run.
SupLinUcbSelector warm_selector(const MarketEnvironment& env, const MechanismConfig& mc,
                                std::uint64_t seed, const std::vector<double>& virtual_costs,
                                std::size_t played, Rng& context_rng) {
  SupLinUcbSelector selector(env.providers(), env.dim(), mc.rounds, mc.alpha, mc.selector);
  Rng reward_rng = make_rng(seed, streams::kReward);
  std::vector<double> rewards(env.providers());
  for (std::size_t t = 1; t <= played; ++t) {
    const Vector x = env.contexts.sample(context_rng);
    for (std::size_t i = 0; i < env.providers(); ++i) {
      rewards[i] = sample_reward(env.reward, env.thetas[i], x, reward_rng);
    }
    const SelectionDecision d = selector.select(x, virtual_costs, t);
    selector.record(d, t, x, rewards[d.winner]);
  }
  return selector;
}

}  // namespace

FrozenSetup make_frozen_setup(const ExperimentConfig& config, std::uint64_t seed, double mu) {
  const MarketEnvironment env = make_environment(config);
  const MechanismConfig mc = bare_config(config);
  Rng rng = make_rng(seed, streams::kStructure);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const std::uint64_t run_seed = rng();
    const BidProfile costs = truthful_bids(env, run_seed);
    std::vector<double> psi(env.providers());
    for (std::size_t i = 0; i < env.providers(); ++i) {
      psi[i] = env.cost_dists[i].virtual_cost(costs.costs[i]);
    }
    const std::size_t played = rng() % (mc.rounds / 2 + 1);
    Rng context_rng = make_rng(run_seed, streams::kContext);
    SupLinUcbSelector selector = warm_selector(env, mc, run_seed, psi, played, context_rng);
    const Vector x = env.contexts.sample(context_rng);
    const std::size_t provider = static_cast<std::size_t>(rng() % env.providers());
    const auto& dist = env.cost_dists[provider];
    const double bid = dist.lo() + 0.5 * uniform01(rng) * (dist.hi() - dist.lo());

    FrozenAllocation alloc{std::move(selector), x, played + 1, provider, psi, dist};
    // Coarse coverage of [bid, hi] by the allocation region.
    constexpr int kProbe = 200;
    int covered = 0;
    for (int k = 0; k < kProbe; ++k) {
      if (alloc(bid + (k + 0.5) / kProbe * (dist.hi() - bid))) ++covered;
    }
    if (covered * 4 >= kProbe) return FrozenSetup{std::move(alloc), bid, mu};
  }
  throw ValidationError("could not find a frozen setup where the provider can win");
}

AuditReport payment_identity_sweep(const ExperimentConfig& config, std::size_t n_setups,
                                   std::size_t n_samples) {
  AuditReport total;
  total.check = "payment-identity";
  total.columns = {"bid", "cost_upper", "mu", "mc_extra_payment", "quadrature", "relative_error"};
  constexpr double kIdentityMu = 0.5;
  for (std::size_t k = 0; k < n_setups; ++k) {
    const std::uint64_t seed = derive_seed(config.base_seed, 7000 + k);
    const FrozenSetup setup = make_frozen_setup(config, seed, kIdentityMu);
    const AuditReport one =
        payment_identity_check(std::cref(setup.allocation), setup.bid,
                               setup.allocation.own_cost.hi(), setup.mu, n_samples, seed);
    total.rows.push_back(one.rows.front());
    total.violations += one.violations;
    if (one.worst_margin >= total.worst_margin) {
      total.worst_margin = one.worst_margin;
      total.standard_error = one.standard_error;
    }
  }
  total.trials = n_setups;
  total.pass = total.violations == 0;
  total.detail = "max relative error over setups";
  return total;
}

// ---------------------------------------------------------------------------

AuditReport agreement_rate(const ExperimentConfig& config, std::size_t n_trials) {
  if (n_trials == 0) throw ValidationError("agreement needs trials");
  const MarketEnvironment env = make_environment(config);
  const MechanismConfig with = mechanism_config(config);
  const MechanismConfig without = bare_config(config);

  AuditReport report;
  report.check = "agreement";
  report.columns = {"seed", "resampled_providers", "identical"};
  std::size_t identical = 0;
  std::size_t no_resample = 0;
  for (std::size_t k = 0; k < n_trials; ++k) {
    const std::uint64_t seed = config.base_seed + k;
    const RunTrace a = run_trcm(env, with, seed);
    const RunTrace b = run_trcm(env, without, seed);
    bool same = true;
    for (std::size_t t = 0; t < a.rounds.size() && same; ++t) {
      same = a.rounds[t].winner == b.rounds[t].winner;
    }
    const std::size_t resampled = a.resample_count();
    if (resampled == 0) {
      ++no_resample;
      if (!same) ++report.violations;
    }
    if (same) ++identical;
    report.rows.push_back({static_cast<double>(seed), static_cast<double>(resampled), same ? 1.0 : 0.0});
  }
  const double n = static_cast<double>(n_trials);
  const double rate = static_cast<double>(identical) / n;
  report.standard_error = std::sqrt(std::max(rate * (1.0 - rate), 1e-12) / n);
  const double bound = 1.0 - static_cast<double>(config.providers) * config.mu;
  report.worst_margin = rate - bound;
  report.trials = n_trials;
  report.pass = report.violations == 0 && rate >= bound - 2.0 * report.standard_error;
  std::ostringstream detail;
  detail << "identical_rate=" << fixed(rate) << " no_resample_rate="
         << fixed(static_cast<double>(no_resample) / n) << " bound=" << fixed(bound)
         << " expected=" << fixed(std::pow(1.0 - config.mu, static_cast<double>(config.providers)));
  report.detail = detail.str();
  return report;
}

// ---------------------------------------------------------------------------

double theory_alpha(std::size_t rounds, std::size_t providers, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ValidationError("kappa must lie in (0, 1)");
  return std::sqrt(0.5 * std::log(2.0 * static_cast<double>(rounds) *
                                  static_cast<double>(providers) / kappa));
}

AuditReport lemma_instrumentation(const ExperimentConfig& config, double kappa) {
  ExperimentConfig cfg = config;
  cfg.alpha = theory_alpha(config.rounds, config.providers, kappa);
  const MarketEnvironment env = make_environment(cfg);
  MechanismConfig mc = mechanism_config(cfg);
  mc.keep_decisions = true;

  AuditReport report;
  report.check = "lemmas";
  report.columns = {"seed", "sandwich_checks", "sandwich_violations", "retention_checks",
                    "retention_violations", "claim_violations"};
  std::size_t sandwich_checks = 0, sandwich_bad = 0, retention_checks = 0, retention_bad = 0;
  std::size_t claim_bad = 0;
  const std::size_t m = env.providers();
  std::vector<double> values(m);
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t seed = cfg.base_seed + k;
    const RunTrace trace = run_trcm(env, mc, seed);
    std::size_t sc = 0, sb = 0, rc = 0, rb = 0;
    std::vector<std::size_t> explore(static_cast<std::size_t>(std::ceil(std::log(cfg.rounds))) + 2, 0);
    std::vector<std::size_t> exploit(explore.size(), 0);
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
      const Vector& x = trace.contexts[t];
      for (std::size_t i = 0; i < m; ++i) values[i] = expected_value(env.thetas[i], x);
      std::size_t best = 0;
      for (std::size_t i = 1; i < m; ++i) {
        if (values[i] - trace.virtual_costs[i] > values[best] - trace.virtual_costs[best]) best = i;
      }
      const SelectionDecision& d = trace.decisions[t];
      for (const StageTrace& pass : d.trace) {
        for (std::size_t a = 0; a < pass.active.size(); ++a) {
          const Estimate& e = pass.estimates[a];
          const double v = values[pass.active[a]];
          ++sc;
          if (!(e.value - e.width <= v && v <= e.value + e.width)) ++sb;
        }
      }
      for (const StageTrace& pass : d.trace) {
        ++rc;
        if (std::find(pass.active.begin(), pass.active.end(), best) == pass.active.end()) ++rb;
      }
      const auto s = static_cast<std::size_t>(d.stage);
      if (d.branch == Branch::ForcedExploration) ++explore[s];
      if (d.branch == Branch::WithinStageExploit) ++exploit[s];
    }
    std::size_t cb = 0;
    for (std::size_t s = 0; s < explore.size(); ++s) {
      if (exploit[s] > (m - 1) * explore[s]) ++cb;
    }
    sandwich_checks += sc;
    sandwich_bad += sb;
    retention_checks += rc;
    retention_bad += rb;
    claim_bad += cb;
    report.rows.push_back({static_cast<double>(seed), static_cast<double>(sc), static_cast<double>(sb),
                           static_cast<double>(rc), static_cast<double>(rb), static_cast<double>(cb)});
  }
  const double sandwich_rate =
      sandwich_checks ? static_cast<double>(sandwich_bad) / static_cast<double>(sandwich_checks) : 0.0;
  const double retention_rate =
      retention_checks ? static_cast<double>(retention_bad) / static_cast<double>(retention_checks) : 0.0;
  report.trials = cfg.seeds;
  report.violations = claim_bad;
  report.worst_margin = kappa - std::max(sandwich_rate, retention_rate);
  report.pass = sandwich_rate <= kappa && retention_rate <= kappa && claim_bad == 0;
  std::ostringstream detail;
  detail << "alpha=" << fixed(cfg.alpha) << " sandwich_rate=" << fixed(sandwich_rate)
         << " retention_rate=" << fixed(retention_rate) << " claim_violations=" << claim_bad;
  report.detail = detail.str();
  return report;
}

// ---------------------------------------------------------------------------

const char* audit_check_name(AuditCheck check) {
  switch (check) {
    case AuditCheck::Monotonicity:
      return "monotonicity";
    case AuditCheck::Epic:
      return "epic";
    case AuditCheck::Epir:
      return "epir";
    case AuditCheck::PaymentIdentity:
      return "payment-identity";
    case AuditCheck::Agreement:
      return "agreement";
    case AuditCheck::Lemmas:
      return "lemmas";
  }
  return "unknown";
}

AuditCheck parse_audit_check(const std::string& name) {
  for (AuditCheck c : {AuditCheck::Monotonicity, AuditCheck::Epic, AuditCheck::Epir,
                       AuditCheck::PaymentIdentity, AuditCheck::Agreement, AuditCheck::Lemmas}) {
    if (name == audit_check_name(c)) return c;
  }
  throw ValidationError("unknown audit check '" + name + "'");
}

AuditPlan default_audit_plan(AuditCheck check) {
  AuditPlan plan;
  ExperimentConfig& c = plan.config;
  c.providers = 4;
  c.dim = 5;
  c.seeds = 1;
  switch (check) {
    case AuditCheck::Monotonicity:
      c.rounds = 2000;
      plan.trials = 200;
      break;
    case AuditCheck::Epic:
      c.providers = 2;
      c.rounds = 500;
      c.mu = 0.1;
      plan.trials = 5000;
      break;
    case AuditCheck::Epir:
      c.rounds = 10000;
      c.seeds = 40;
      plan.trials = 40;
      break;
    case AuditCheck::PaymentIdentity:
      c.rounds = 2000;
      plan.trials = 20;
      break;
    case AuditCheck::Agreement:
      c.rounds = 1000;
      c.mu = 0.05;
      plan.trials = 2000;
      break;
    case AuditCheck::Lemmas:
      c.providers = 3;
      c.dim = 3;
      c.rounds = 5000;
      c.seeds = 5;
      plan.trials = 5;
      break;
  }
  return plan;
}

namespace {

/// Eleven evenly spaced bids over provider 0's support; the true cost is the
/// fifth point and the other provider bids the middle of its support.
struct EpicGrid {
  std::vector<double> grid;
  std::vector<double> costs;
};

EpicGrid epic_grid(const MarketEnvironment& env) {
  EpicGrid g;
  const auto& d0 = env.cost_dists[0];
  for (int k = 0; k <= 10; ++k) g.grid.push_back(d0.lo() + (d0.hi() - d0.lo()) * k / 10.0);
  g.grid.back() = d0.hi();
  for (const auto& d : env.cost_dists) g.costs.push_back(0.5 * (d.lo() + d.hi()));
  g.costs[0] = g.grid[4];
  return g;
}

}  // namespace

AuditReport run_audit(AuditCheck check, const AuditPlan& plan) {
  const ExperimentConfig& c = plan.config;
  switch (check) {
    case AuditCheck::Monotonicity:
      return monotonicity_sweep(c, plan.trials);
    case AuditCheck::Epic: {
      const EpicGrid g = epic_grid(make_environment(c));
      return epic_estimate(c, 0, g.costs, g.grid, plan.trials);
    }
    case AuditCheck::Epir: {
      ExperimentConfig cfg = c;
      cfg.seeds = plan.trials;
      return epir_sweep(cfg);
    }
    case AuditCheck::PaymentIdentity:
      return payment_identity_sweep(c, plan.trials, 100000);
    case AuditCheck::Agreement:
      return agreement_rate(c, plan.trials);
    case AuditCheck::Lemmas: {
      ExperimentConfig cfg = c;
      cfg.seeds = plan.trials;
      return lemma_instrumentation(cfg, 0.05);
    }
  }
  throw ValidationError("unknown audit check");
}

}  // namespace trcm
