#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "trcm/harness.hpp"

namespace trcm {

/// Result of one executable property check. `rows` hold per-trial values in
/// `columns` order; the CSV adds a trailing summary row.
struct AuditReport {
  std::string check;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  double standard_error = 0.0;
  bool pass = false;
  std::string detail;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  std::string summary_line() const;
};

// ---------------------------------------------------------------------------
// Ex-post monotonicity

/// Paired runs (resampling off) that differ only in `provider`'s bid. Counts
/// rounds where the cumulative allocation under the lower bid falls below the
/// count under the higher bid. Also counts rounds whose forced-exploration
/// event (round, provider, stage) differs between the pair.
AuditReport monotonicity_probe(const ExperimentConfig& config, std::size_t provider,
                               double bid_low, double bid_high, std::size_t n_seeds);

/// `n_probes` probes, each with a random provider, a random ordered bid pair
/// inside that provider's support, and its own seed.
AuditReport monotonicity_sweep(const ExperimentConfig& config, std::size_t n_probes);

// ---------------------------------------------------------------------------
// Incentive compatibility

/// Mean total utility sum_t (p_t - c_i A_t) of `provider` for each bid in the
/// grid, others bidding their fixed true costs. Trial k uses run seed
/// base_seed + k for every grid point. Passes when the truthful point is within
/// two standard errors (of each deviation's mean) of every deviation.
AuditReport epic_estimate(const ExperimentConfig& config, std::size_t provider,
                          const std::vector<double>& true_costs,
                          const std::vector<double>& bid_grid, std::size_t n_trials);

/// Every (provider, round) utility of truthful providers is >= 0. Exact.
AuditReport epir_check(const RunTrace& trace);

/// epir_check over config.seeds runs of the full mechanism.
AuditReport epir_sweep(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Payment identity

/// Monte Carlo estimate of E[R] = E[1{resampled} A(b~) (c_upper - b) / mu]
/// against midpoint quadrature of int_b^{c_upper} A(u) du (10^4 points).
/// Passes at relative error <= 5%, or exact equality when the integral is 0.
AuditReport payment_identity_check(const std::function<bool(double)>& allocation, double bid,
                                   double cost_upper, double mu, std::size_t n_samples,
                                   std::uint64_t seed);

/// One provider's allocation as a function of its (modified) bid with
/// everything else frozen: learner state, context, round and the others' bids.
struct FrozenAllocation {
  SupLinUcbSelector selector;
  Vector context;
  std::size_t round;
  std::size_t provider;
  std::vector<double> virtual_costs;  // others' entries are used
  CostDistribution own_cost;

  bool operator()(double bid) const;
};

struct FrozenSetup {
  FrozenAllocation allocation;
  double bid;
  double mu;
};

/// Warm-starts the learner on a random prefix of a truthful run, then picks a
/// random provider, context and bid. Setups are redrawn until the provider's
/// allocation covers at least a quarter of [bid, c_upper], so the Monte Carlo
/// estimate has a bounded relative error.
FrozenSetup make_frozen_setup(const ExperimentConfig& config, std::uint64_t seed, double mu);

/// `n_setups` frozen setups; passes when each one does.
AuditReport payment_identity_sweep(const ExperimentConfig& config, std::size_t n_setups,
                                   std::size_t n_samples);

// ---------------------------------------------------------------------------
// Agreement with the bare algorithm

/// Paired runs with and without resampling under shared seeds. Passes when the
/// identical-allocation fraction is >= 1 - M mu - 2 SE and every trial without
/// a resampled bid agrees exactly.
AuditReport agreement_rate(const ExperimentConfig& config, std::size_t n_trials);

// ---------------------------------------------------------------------------
// Confidence-bound lemma and exploitation claim

/// alpha = sqrt(ln(2 T M / kappa) / 2).
double theory_alpha(std::size_t rounds, std::size_t providers, double kappa);

/// Known-theta instrumented runs (config.seeds of them) with the theory alpha.
/// Checks (i) v_hat - w <= v <= v_hat + w per (round, stage, active provider),
/// (ii) the unfloored surplus maximizer stays in every active set, and
/// (iii) |within-stage exploit rounds at s| <= (M - 1) * |stage-s exploration rounds|.
AuditReport lemma_instrumentation(const ExperimentConfig& config, double kappa);

// ---------------------------------------------------------------------------
// CLI-facing defaults

enum class AuditCheck { Monotonicity, Epic, Epir, PaymentIdentity, Agreement, Lemmas };

const char* audit_check_name(AuditCheck check);
AuditCheck parse_audit_check(const std::string& name);

/// Parameters used when a check runs with no overrides.
struct AuditPlan {
  ExperimentConfig config;
  std::size_t trials = 0;
};
AuditPlan default_audit_plan(AuditCheck check);

AuditReport run_audit(AuditCheck check, const AuditPlan& plan);

}  // namespace trcm
