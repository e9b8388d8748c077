#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trcm/env.hpp"

namespace trcm {

/// Value estimate and confidence width for one provider at one stage.
struct Estimate {
  double value = 0.0;
  double width = 0.0;
};

/// Ridge statistics for one (provider, stage) pair: A^{-1} with A = I + sum x x',
/// g = sum r x, and the rounds that contributed.
class StageModel {
 public:
  explicit StageModel(int dim);

  int dim() const { return static_cast<int>(weighted_sum_.size()); }
  const Matrix& gram_inverse() const { return gram_inverse_; }
  const Vector& weighted_sum() const { return weighted_sum_; }
  const std::vector<std::size_t>& rounds() const { return rounds_; }

  Vector theta_hat() const { return gram_inverse_ * weighted_sum_; }

  void add(std::size_t round, const Vector& x, double reward);

 private:
  Matrix gram_inverse_;
  Vector weighted_sum_;
  std::vector<std::size_t> rounds_;
};

/// (A + x x')^{-1} from A^{-1}; the result is symmetrized.
Matrix sherman_morrison_update(const Matrix& gram_inverse, const Vector& x);

/// v = theta_hat' x, w = alpha * sqrt(x' A^{-1} x).
Estimate base_linucb(const StageModel& model, const Vector& x, double alpha);

enum class Branch { ForcedExploration, PureExploit, WithinStageExploit };

const char* branch_name(Branch branch);

/// Active providers and their estimates at one pass of the stage loop.
struct StageTrace {
  int stage = 1;
  std::vector<std::size_t> active;
  std::vector<Estimate> estimates;  // aligned with `active`
};

struct SelectionDecision {
  std::size_t winner = 0;
  Branch branch = Branch::ForcedExploration;
  int stage = 1;
  bool learn = false;
  /// False when the participation floor declines an exploitation pick whose
  /// optimistic virtual surplus is negative. Forced exploration always allocates.
  bool allocated = true;
  std::vector<StageTrace> trace;  // one entry per visited stage, last one decides

  const StageTrace& deciding_stage() const { return trace.back(); }
};

struct SelectorOptions {
  bool participation_floor = true;
};

/// Staged, monotone contextual selector (one ridge model per provider per stage).
///
/// Each round starts from the full provider set at stage 1. The round-robin
/// provider j = t mod M is force-explored when it is still active and its width
/// exceeds 2^-s; only those rounds feed the stage-s model of j. Otherwise the
/// optimistic virtual surplus (v + w) - Psi_i decides: pure exploitation once every
/// width is below 1/sqrt(T), elimination and a deeper stage once every width is
/// below 2^-s, and exploitation within the current stage otherwise. At the last
/// stage the loop falls through to within-stage exploitation.
class SupLinUcbSelector {
 public:
  SupLinUcbSelector(std::size_t providers, int dim, std::size_t horizon, double alpha,
                    SelectorOptions options = {});

  std::size_t providers() const { return providers_; }
  int dim() const { return dim_; }
  std::size_t horizon() const { return horizon_; }
  double alpha() const { return alpha_; }
  int max_stage() const { return max_stage_; }
  const SelectorOptions& options() const { return options_; }

  /// Round-robin provider designated for forced exploration in round t.
  std::size_t designated(std::size_t t) const { return t % providers_; }

  /// Does not mutate the state. t is 1-based.
  SelectionDecision select(const Vector& x, std::span<const double> virtual_costs,
                           std::size_t t) const;

  /// Feeds the outcome of round t back. Only forced-exploration decisions touch
  /// the ridge statistics; other branches only update round bookkeeping.
  void record(const SelectionDecision& decision, std::size_t t, const Vector& x, double reward);

  /// stage is 1-based.
  const StageModel& model(std::size_t provider, int stage) const;
  const std::vector<std::size_t>& pure_exploit_rounds() const { return pure_exploit_rounds_; }
  const std::vector<std::size_t>& stage_exploit_rounds(int stage) const;
  /// |union over providers of the stage-s exploration rounds|.
  std::size_t stage_exploration_count(int stage) const;

 private:
  std::size_t index(std::size_t provider, int stage) const;

  std::size_t providers_;
  int dim_;
  std::size_t horizon_;
  double alpha_;
  int max_stage_;
  SelectorOptions options_;
  std::vector<StageModel> models_;  // provider-major, stage-minor
  std::vector<std::size_t> pure_exploit_rounds_;
  std::vector<std::vector<std::size_t>> stage_exploit_rounds_;
  std::vector<std::uint8_t> recorded_;
};

}  // namespace trcm
