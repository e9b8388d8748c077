// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <string>

#include "trcm/audit.hpp"
#include "trcm/harness.hpp"

using namespace trcm;

namespace {

struct Tally {
  int failed = 0;

  void line(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

AuditReport timed_audit(AuditCheck check, double& secs) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport r = run_audit(check, default_audit_plan(check));
  secs = seconds_since(start);
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Sublinearity {
  double ratio;
  double decile;
  bool pass() const { return ratio <= 1.6 && decile <= 0.25; }
};

Sublinearity sublinearity(const ExperimentResult& r) {
  const std::size_t t = r.rounds();
  const std::size_t tenth = t / 10;
  const auto& per = r.mean_round_regret;
  const double head = std::accumulate(per.begin(), per.begin() + tenth, 0.0);
  const double tail = std::accumulate(per.end() - tenth, per.end(), 0.0);
  return {r.mean_cum_regret[t - 1] / r.mean_cum_regret[t / 2 - 1], tail / head};
}

ExperimentConfig sweep_config(RewardModel::Kind reward, const std::filesystem::path& out) {
  ExperimentConfig c;
  c.rounds = 10000;
  c.seeds = 40;
  c.providers = 4;
  c.dim = 5;
  c.alpha = 0.75;
  c.reward = reward;
  c.threads = 1;
  c.output_dir = out;
  return c;
}

}  // namespace

int main() {
  Tally tally;
  double secs = 0.0;
  const auto scratch = std::filesystem::temp_directory_path() / "trcm_acceptance";
  std::filesystem::remove_all(scratch);

  {
    const AuditReport r = timed_audit(AuditCheck::Monotonicity, secs);
    tally.line(1, "ex-post monotonicity", r.violations == 0 && secs <= 120.0,
               std::to_string(r.trials) + " paired probes, " + std::to_string(r.violations) +
                   " violations, " + fmt("%.1fs", secs));
  }
  {
    const AuditReport r = timed_audit(AuditCheck::Epir, secs);
    tally.line(2, "EPIR", r.violations == 0,
               std::to_string(r.trials) + " seeds x T=10000, " + std::to_string(r.violations) +
                   " violations, min utility " + fmt("%.4g", r.worst_margin));
  }
  {
    const AuditReport r = timed_audit(AuditCheck::Epic, secs);
    tally.line(3, "EPIC", r.pass && secs <= 600.0,
               std::to_string(r.violations) + " grid points beyond 2 SE, worst (truth-dev)/SE " +
                   fmt("%.3f", r.worst_margin) + ", " + fmt("%.1fs", secs));
  }
  {
    const AuditReport r = timed_audit(AuditCheck::PaymentIdentity, secs);
    tally.line(4, "payment identity", r.violations == 0,
               std::to_string(r.trials) + " frozen setups, max relative error " +
                   fmt("%.4f", r.worst_margin));
  }
  {
    const AuditPlan plan = default_audit_plan(AuditCheck::Agreement);
    const AuditReport r = run_audit(AuditCheck::Agreement, plan);
    const double bound = 1.0 - static_cast<double>(plan.config.providers) * plan.config.mu;
    const double rate = bound + r.worst_margin;
    const double exact = std::pow(1.0 - plan.config.mu, static_cast<double>(plan.config.providers));
    const bool pass = r.violations == 0 && rate >= bound &&
                      std::abs(rate - exact) <= 3.0 * r.standard_error;
    tally.line(5, "agreement probability", pass,
               fmt("rate %.4f, bound %.2f, (1-mu)^M %.4f, SE %.4f", rate, bound, exact,
                   r.standard_error));
  }

  // Criterion 8 times the Gaussian sweep; criterion 6 reruns it and criterion 9
  // compares the two output directories byte for byte.
  const auto run_a = scratch / "gaussian_a";
  const auto run_b = scratch / "gaussian_b";
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult timed = run_experiment(sweep_config(RewardModel::Kind::GaussianLinear, run_a));
  const double sweep_secs = seconds_since(start);
  (void)timed;

  {
    const ExperimentResult g = run_experiment(sweep_config(RewardModel::Kind::GaussianLinear, run_b));
    const ExperimentResult e = run_experiment(
        sweep_config(RewardModel::Kind::ExponentialSoftplus, scratch / "exponential"));
    const Sublinearity sg = sublinearity(g);
    const Sublinearity se = sublinearity(e);
    tally.line(6, "regret sublinearity", sg.pass() && se.pass(),
               fmt("gaussian R_T/R_T2 %.3f tail/head %.3f; exponential R_T/R_T2 %.3f tail/head %.3f",
                   sg.ratio, sg.decile, se.ratio, se.decile) +
                   " (limits 1.6 and 0.25)");
  }
  {
    const AuditReport r = timed_audit(AuditCheck::Lemmas, secs);
    tally.line(7, "confidence lemma and claim", r.pass, r.detail);
  }
  tally.line(8, "timing anchor", sweep_secs <= 300.0,
             fmt("40 seeds x T=10000 single-threaded in %.2fs (limit 300s)", sweep_secs));
  {
    bool same = true;
    for (const char* f : {"metrics_by_round.csv", "runs_summary.csv"}) {
      const std::string a = slurp(run_a / f);
      same = same && !a.empty() && a == slurp(run_b / f);
    }
    const AuditPlan plan = default_audit_plan(AuditCheck::Agreement);
    AuditPlan quick = plan;
    quick.trials = 100;
    same = same && run_audit(AuditCheck::Agreement, quick).to_csv() ==
                       run_audit(AuditCheck::Agreement, quick).to_csv();
    tally.line(9, "determinism", same, "sweep CSVs and audit CSV identical across reruns");
  }

  std::filesystem::remove_all(scratch);
  std::printf("%d criteria failed\n", tally.failed);
  return tally.failed == 0 ? 0 : 1;
}
