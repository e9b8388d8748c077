// trcm: run seed sweeps of the mechanism and its truthfulness audits.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trcm/audit.hpp"
#include "trcm/error.hpp"
#include "trcm/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct RunArgs {
  trcm::ExperimentConfig config;
  std::string reward = "gaussian";
  std::string cost_family = "uniform";
  std::string out;
};

struct AuditArgs {
  std::vector<std::string> checks;
  std::size_t trials = 0;
  std::string out;
};

/// Fills options that were not given on the command line from a key=value file.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty()) {
      throw trcm::ValidationError("config sections are not supported: " + item.fullname());
    }
    CLI::Option* opt = cmd.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw trcm::ValidationError("unknown config key '" + item.name + "'");
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw trcm::ValidationError("config key '" + item.name + "': " + e.what());
    }
  }
}

int do_run(RunArgs& args) {
  auto& cfg = args.config;
  cfg.reward = args.reward == "exponential" ? trcm::RewardModel::Kind::ExponentialSoftplus
                                            : trcm::RewardModel::Kind::GaussianLinear;
  cfg.cost_family =
      args.cost_family == "lognormal" ? trcm::CostFamily::LogNormal : trcm::CostFamily::Uniform;
  cfg.output_dir = args.out;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const trcm::ExperimentResult result = trcm::run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::size_t t = result.rounds();
  std::printf("runs=%zu rounds=%zu mean_regret_T=%.6f mean_regret_T/2=%.6f elapsed=%.2fs\n",
              result.runs.size(), t, result.mean_cum_regret.back(),
              result.mean_cum_regret[t / 2 - (t >= 2 ? 1 : 0)], secs);
  if (!args.out.empty()) std::printf("wrote outputs to %s\n", args.out.c_str());
  return kExitOk;
}

int do_audit(const AuditArgs& args) {
  bool all_pass = true;
  for (const auto& name : args.checks) {
    const trcm::AuditCheck check = trcm::parse_audit_check(name);
    trcm::AuditPlan plan = trcm::default_audit_plan(check);
    if (args.trials > 0) plan.trials = args.trials;
    const trcm::AuditReport report = trcm::run_audit(check, plan);
    std::cout << report.summary_line() << '\n';
    if (!args.out.empty()) {
      trcm::write_text_file(std::filesystem::path(args.out) / (report.check + ".csv"),
                            report.to_csv());
    }
    all_pass = all_pass && report.pass;
  }
  return all_pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truthful reverse auctions with a contextual bandit learner"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Seed sweep with regret and revenue outputs");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Flat key=value file; flags override it");
  auto& c = run.config;
  run_cmd->add_option("--rounds", c.rounds, "Horizon T")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seeds", c.seeds, "Number of seeds N")->check(CLI::PositiveNumber);
  run_cmd->add_option("--providers", c.providers, "Providers M")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dim", c.dim, "Context dimension d")->check(CLI::PositiveNumber);
  run_cmd->add_option("--mu", c.mu, "Resampling probability");
  run_cmd->add_option("--alpha", c.alpha, "Confidence width multiplier");
  run_cmd->add_option("--reward", run.reward, "Reward regime")
      ->check(CLI::IsMember({"gaussian", "exponential"}));
  run_cmd->add_option("--cost-family", run.cost_family, "Cost distribution family")
      ->check(CLI::IsMember({"uniform", "lognormal"}));
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--base-seed", c.base_seed, "First run seed");
  run_cmd->add_option("--structural-seed", c.structural_seed, "Seed for theta and cost laws");
  run_cmd->add_option("--noise-sigma", c.noise_sigma, "Gaussian reward noise");
  run_cmd->add_option("--threads", c.threads, "Worker threads");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Executable truthfulness and learning checks");
  audit_cmd
      ->add_option("--check", audit.checks,
                   "monotonicity|epic|epir|payment-identity|agreement|lemmas (repeatable)")
      ->required()
      ->check(CLI::IsMember(
          {"monotonicity", "epic", "epir", "payment-identity", "agreement", "lemmas"}));
  audit_cmd->add_option("--trials", audit.trials, "Override the trial count");
  audit_cmd->add_option("--out", audit.out, "Directory for per-check CSV reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run_cmd) {
      if (!config_path.empty()) apply_config_file(*run_cmd, config_path);
      return do_run(run);
    }
    return do_audit(audit);
  } catch (const trcm::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::FileError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const trcm::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}
