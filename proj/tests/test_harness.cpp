#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "trcm/error.hpp"
#include "trcm/harness.hpp"
#include "trcm/oracle.hpp"

using namespace trcm;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

/// Element nesting check: every start tag is closed in order.
bool tags_balanced(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t p = 0;
  while ((p = doc.find('<', p)) != std::string::npos) {
    const std::size_t end = doc.find('>', p);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(p + 1, end - p - 1);
    p = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    stack.push_back(tag.substr(0, tag.find_first_of(" \n\t")));
  }
  return stack.empty();
}

ExperimentConfig tiny() {
  ExperimentConfig cfg;
  cfg.rounds = 100;
  cfg.seeds = 2;
  return cfg;
}

}  // namespace

TEST_CASE("oracle choice and instantaneous regret") {
  CHECK(*oracle_choice(std::vector<double>{0.6}, std::vector<double>{0.1}) == 0);
  CHECK_FALSE(oracle_choice(std::vector<double>{0.1, 0.2}, std::vector<double>{0.3, 0.5}));
  CHECK(*oracle_choice(std::vector<double>{0.7, 0.9}, std::vector<double>{0.2, 0.5}) == 0);

  const std::vector<double> v{0.7, 0.9};
  const std::vector<double> psi{0.2, 0.5};
  CHECK(instantaneous_regret(v, psi, 0) == 0.0);
  CHECK(instantaneous_regret(v, psi, 1) == doctest::Approx(0.1));
  CHECK(instantaneous_regret(std::vector<double>{0.1}, std::vector<double>{0.3}, std::nullopt) ==
        0.0);

  std::vector<Vector> thetas(2, Vector(2));
  thetas[0] << 1.0, 0.0;
  thetas[1] << 0.0, 1.0;
  Vector x(2);
  x << 0.7, 0.9;
  CHECK(instantaneous_regret(thetas, x, psi, 1) == doctest::Approx(0.1));
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg = tiny();
  cfg.mu = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = tiny();
  cfg.rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = tiny();
  cfg.providers = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("CSV outputs have the fixed headers and are deterministic") {
  const ExperimentResult a = run_experiment(tiny());
  const ExperimentResult b = run_experiment(tiny());
  const std::string csv = round_csv(a);
  CHECK(csv.substr(0, csv.find('\n')) == kRoundCsvHeader);
  CHECK(count(csv, "\n") == 101);
  CHECK(csv == round_csv(b));
  CHECK(run_csv(a) == run_csv(b));
  CHECK(run_csv(a).substr(0, run_csv(a).find('\n')) == kRunCsvHeader);

  ExperimentConfig one = tiny();
  one.rounds = 1;
  one.providers = 1;
  CHECK(count(round_csv(run_experiment(one)), "\n") == 2);
}

TEST_CASE("thread count does not change the output bytes") {
  ExperimentConfig cfg = tiny();
  cfg.seeds = 5;
  const std::string serial = run_csv(run_experiment(cfg));
  cfg.threads = 3;
  CHECK(run_csv(run_experiment(cfg)) == serial);
}

TEST_CASE("doubles round-trip through the CSV formatter") {
  for (double v : {0.1, 1.0 / 3.0, 12345.678901234567, -2.5e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("plots carry two series and are well-formed") {
  ExperimentConfig cfg = tiny();
  cfg.rounds = 500;
  cfg.seeds = 20;
  const ExperimentResult r = run_experiment(cfg);
  for (PlotKind kind : {PlotKind::CumRegret, PlotKind::RoundRegret, PlotKind::Revenue}) {
    const std::string svg = render_plot(r, kind);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(tags_balanced(svg));
    CHECK(svg.find("<svg") != std::string::npos);
  }
  for (std::size_t t = 0; t < r.rounds(); ++t) {
    CHECK(r.mean_clairvoyant_utility[t] >= r.mean_user_utility[t]);
  }
}

TEST_CASE("outputs land in the requested directory") {
  const auto dir = std::filesystem::temp_directory_path() / "trcm_harness_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny();
  cfg.output_dir = dir;
  run_experiment(cfg);
  for (const char* f : {"metrics_by_round.csv", "runs_summary.csv", "cum_regret.svg",
                        "round_regret.svg", "revenue.svg"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(write_text_file("/proc/trcm/nope.csv", "x"), IoError);
}

TEST_CASE("metrics agree with the trace") {
  ExperimentConfig cfg = tiny();
  const MarketEnvironment env = make_environment(cfg);
  const RunTrace tr = run_trcm(env, mechanism_config(cfg), 3);
  const RunMetrics m = compute_metrics(tr);
  double regret = 0.0;
  double paid = 0.0;
  for (std::size_t t = 0; t < tr.rounds.size(); ++t) {
    const RoundOutcome& r = tr.rounds[t];
    const double best = r.oracle ? r.oracle_surplus : 0.0;
    const double got = r.winner ? r.winner_value - tr.virtual_costs[*r.winner] : 0.0;
    regret += std::max(0.0, best - got);
    paid += r.payment;
  }
  CHECK(m.total_regret == doctest::Approx(regret));
  CHECK(m.total_payments == doctest::Approx(paid));
}
