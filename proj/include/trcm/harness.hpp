#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "trcm/mechanism.hpp"

namespace trcm {

enum class CostFamily { Uniform, LogNormal };
enum class BidSource { Truthful, AffineLogNormal };

struct ExperimentConfig {
  std::size_t rounds = 10000;
  std::size_t seeds = 40;
  std::size_t providers = 4;
  int dim = 5;
  double mu = 0.05;
  double alpha = 0.75;
  RewardModel::Kind reward = RewardModel::Kind::GaussianLinear;
  double noise_sigma = 0.1;
  CostFamily cost_family = CostFamily::Uniform;
  double diag_scale = 0.2;
  double offdiag_corr = 0.05;
  std::uint64_t base_seed = 1;
  /// Seeds theta and the cost laws; held fixed across the seed sweep.
  std::uint64_t structural_seed = 2024;
  /// theta_i entries are N(0, theta_scale^2).
  double theta_scale = 1.0;
  BidSource bid_source = BidSource::Truthful;
  double bid_scale = 0.15;
  bool participation_floor = true;
  unsigned threads = 1;
  std::filesystem::path output_dir;

  void validate() const;
};

RewardModel reward_model(const ExperimentConfig& config);
MechanismConfig mechanism_config(const ExperimentConfig& config);

/// Draws theta_i ~ N(0, theta_scale^2 I_d) and the per-provider cost laws from the structural seed.
/// Provider i has cost support [0.05 (i + 1), 0.05 (i + 1) + 0.5].
MarketEnvironment make_environment(const ExperimentConfig& config);

/// Bids for one run: truthful, or one draw from the context-affine log-normal
/// bid model evaluated at a fresh t = 0 context.
BidProfile elicit_bids(const ExperimentConfig& config, const MarketEnvironment& env,
                       std::uint64_t run_seed);

struct RunMetrics {
  std::uint64_t seed = 0;
  std::vector<long> winner;  // -1 when nobody is allocated
  std::vector<Branch> branch;
  std::vector<double> payment;
  std::vector<double> instantaneous_regret;
  std::vector<double> cumulative_regret;
  std::vector<double> user_utility;         // v - p of the winner, per round
  std::vector<double> clairvoyant_utility;  // per round
  double total_regret = 0.0;
  double total_utility = 0.0;
  double total_payments = 0.0;
  std::size_t resample_count = 0;

  std::size_t rounds() const { return winner.size(); }
};

RunMetrics compute_metrics(const RunTrace& trace);

struct ExperimentResult {
  std::vector<RunMetrics> runs;  // ordered by seed index
  std::vector<double> mean_cum_regret;
  std::vector<double> mean_round_regret;
  std::vector<double> mean_user_utility;         // cumulative
  std::vector<double> mean_clairvoyant_utility;  // cumulative

  std::size_t rounds() const { return mean_cum_regret.size(); }
};

/// Averages per-round curves across runs, in run order.
ExperimentResult aggregate(std::vector<RunMetrics> runs);

/// Runs seeds base_seed .. base_seed + N - 1 and writes CSV and SVG outputs
/// when config.output_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class PlotKind { CumRegret, RoundRegret, Revenue };

inline constexpr const char* kRoundCsvHeader =
    "round,mean_cum_regret,mean_round_regret,mean_user_utility,mean_clairvoyant_utility";
inline constexpr const char* kRunCsvHeader =
    "seed,total_regret,total_utility,total_payments,resample_count";

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir);
std::string round_csv(const ExperimentResult& result);
std::string run_csv(const ExperimentResult& result);

void emit_plot(const ExperimentResult& result, PlotKind kind, const std::filesystem::path& path);
std::string render_plot(const ExperimentResult& result, PlotKind kind);

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

/// Writes `content` to `path`, creating parent directories; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace trcm
