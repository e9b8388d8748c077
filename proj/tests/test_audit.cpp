#include <cmath>
#include <vector>

#include "doctest.h"
#include "trcm/audit.hpp"
#include "trcm/error.hpp"

using namespace trcm;

namespace {

ExperimentConfig small(std::size_t providers, std::size_t rounds) {
  ExperimentConfig cfg;
  cfg.providers = providers;
  cfg.dim = 3;
  cfg.rounds = rounds;
  cfg.seeds = 3;
  return cfg;
}

}  // namespace

TEST_CASE("step allocation: premium matches the closed-form integral") {
  auto step = [](double u) { return u <= 6.0; };
  for (double mu : {0.1, 0.5, 0.9}) {
    const AuditReport r = payment_identity_check(step, 2.0, 10.0, mu, 100000, 3);
    CHECK(r.rows.front()[4] == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(r.pass);
  }
}

TEST_CASE("degenerate payment identity cases") {
  auto always = [](double) { return true; };
  const AuditReport top = payment_identity_check(always, 10.0, 10.0, 0.5, 1000, 1);
  CHECK(top.rows.front()[3] == 0.0);
  CHECK(top.rows.front()[4] == 0.0);
  CHECK(top.pass);
  auto never = [](double) { return false; };
  CHECK(payment_identity_check(never, 2.0, 10.0, 0.5, 1000, 1).pass);
}

TEST_CASE("identical probe bids give identical counts") {
  const ExperimentConfig cfg = small(3, 300);
  const AuditReport r = monotonicity_probe(cfg, 1, 0.3, 0.3, 3);
  CHECK(r.pass);
  for (const auto& row : r.rows) CHECK(row[4] == row[5]);
  CHECK_THROWS_AS(monotonicity_probe(cfg, 1, 0.4, 0.3, 1), ValidationError);
  CHECK_THROWS_AS(monotonicity_probe(cfg, 9, 0.3, 0.4, 1), ValidationError);
}

TEST_CASE("extreme bid pair: bidding the upper bound never wins more") {
  const ExperimentConfig cfg = small(4, 500);
  const MarketEnvironment env = make_environment(cfg);
  const auto& d = env.cost_dists[2];
  const AuditReport r = monotonicity_probe(cfg, 2, d.lo(), d.hi(), 5);
  CHECK(r.violations == 0);
  for (const auto& row : r.rows) CHECK(row[4] >= row[5]);
}

TEST_CASE("EPIC with a single grid point passes trivially") {
  ExperimentConfig cfg = small(2, 50);
  const MarketEnvironment env = make_environment(cfg);
  const std::vector<double> costs{0.2, 0.3};
  CHECK(epic_estimate(cfg, 0, costs, {0.2}, 20).pass);
  CHECK_THROWS_AS(epic_estimate(cfg, 0, costs, {0.2, 0.9}, 20), ValidationError);
  CHECK_THROWS_AS(epic_estimate(cfg, 0, costs, {0.25}, 20), ValidationError);
}

TEST_CASE("underbidding half the true cost does not pay") {
  ExperimentConfig cfg = small(2, 200);
  cfg.mu = 0.1;
  const std::vector<double> costs{0.3, 0.35};
  const AuditReport r = epic_estimate(cfg, 0, costs, {0.3, 0.15}, 1000);
  CHECK(r.pass);
}

TEST_CASE("EPIR holds on truthful traces") {
  ExperimentConfig cfg = small(4, 1000);
  cfg.mu = 0.2;
  cfg.seeds = 5;
  const AuditReport r = epir_sweep(cfg);
  CHECK(r.violations == 0);
  CHECK(r.worst_margin >= 0.0);
}

TEST_CASE("agreement rate sits at the no-resample probability") {
  ExperimentConfig cfg = small(4, 200);
  cfg.mu = 1e-9;
  const AuditReport none = agreement_rate(cfg, 200);
  CHECK(none.pass);
  for (const auto& row : none.rows) CHECK(row[2] == 1.0);

  ExperimentConfig single = small(1, 200);
  single.mu = 0.5;
  const AuditReport r = agreement_rate(single, 1000);
  CHECK(r.pass);
  // identical whenever nothing resamples, so at least 1 - mu in expectation
  const double rate = (1.0 - single.mu) + r.worst_margin;
  CHECK(rate + 3.0 * r.standard_error >= 0.5);
}

TEST_CASE("theory alpha and lemma instrumentation") {
  CHECK(theory_alpha(5000, 3, 0.05) == doctest::Approx(std::sqrt(0.5 * std::log(600000.0))));
  CHECK_THROWS_AS(theory_alpha(10, 2, 0.0), ValidationError);
  ExperimentConfig cfg = small(3, 1000);
  cfg.seeds = 2;
  CHECK(lemma_instrumentation(cfg, 0.05).pass);

  ExperimentConfig single = small(1, 500);
  single.seeds = 2;
  const AuditReport r = lemma_instrumentation(single, 0.05);
  CHECK(r.violations == 0);
}

TEST_CASE("audit names round-trip and reports serialize") {
  for (AuditCheck c : {AuditCheck::Monotonicity, AuditCheck::Epic, AuditCheck::Epir,
                       AuditCheck::PaymentIdentity, AuditCheck::Agreement, AuditCheck::Lemmas}) {
    CHECK(parse_audit_check(audit_check_name(c)) == c);
  }
  CHECK_THROWS_AS(parse_audit_check("nope"), ValidationError);
  const AuditReport r = payment_identity_check([](double) { return true; }, 2.0, 3.0, 0.5, 100, 1);
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("trial,bid,", 0) == 0);
  CHECK(csv.find("\nsummary,check=payment-identity") != std::string::npos);
}
