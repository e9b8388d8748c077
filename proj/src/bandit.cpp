#include "trcm/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trcm/error.hpp"

namespace trcm {

StageModel::StageModel(int dim)
    : gram_inverse_(Matrix::Identity(dim, dim)), weighted_sum_(Vector::Zero(dim)) {}

void StageModel::add(std::size_t round, const Vector& x, double reward) {
  if (x.size() != dim()) throw ValidationError("context length does not match model dimension");
  gram_inverse_ = sherman_morrison_update(gram_inverse_, x);
  weighted_sum_ += reward * x;
  rounds_.push_back(round);
}

Matrix sherman_morrison_update(const Matrix& gram_inverse, const Vector& x) {
  if (gram_inverse.rows() != x.size() || gram_inverse.cols() != x.size()) {
    throw ValidationError("Gram inverse and context dimensions differ");
  }
  const Vector ax = gram_inverse * x;
  const double denom = 1.0 + x.dot(ax);
  Matrix updated = gram_inverse - (ax * ax.transpose()) / denom;
  return 0.5 * (updated + updated.transpose());
}

Estimate base_linucb(const StageModel& model, const Vector& x, double alpha) {
  if (x.size() != model.dim()) {
    throw ValidationError("context has length " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(model.dim()));
  }
  if (alpha < 0.0) throw ValidationError("alpha must be >= 0");
  const Vector theta = model.theta_hat();
  const double quad = x.dot(model.gram_inverse() * x);
  return {theta.dot(x), alpha * std::sqrt(std::max(quad, 0.0))};
}

const char* branch_name(Branch branch) {
  switch (branch) {
    case Branch::ForcedExploration:
      return "forced_exploration";
    case Branch::PureExploit:
      return "pure_exploit";
    case Branch::WithinStageExploit:
      return "within_stage_exploit";
  }
  return "unknown";
}

SupLinUcbSelector::SupLinUcbSelector(std::size_t providers, int dim, std::size_t horizon,
                                     double alpha, SelectorOptions options)
    : providers_(providers), dim_(dim), horizon_(horizon), alpha_(alpha), options_(options) {
  if (providers == 0) throw ValidationError("selector needs at least one provider");
  if (dim < 1) throw ValidationError("context dimension must be >= 1");
  if (horizon == 0) throw ValidationError("horizon must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be finite and >= 0");
  max_stage_ = std::max(1, static_cast<int>(std::ceil(std::log(static_cast<double>(horizon)))));
  models_.assign(providers_ * static_cast<std::size_t>(max_stage_), StageModel(dim));
  stage_exploit_rounds_.resize(static_cast<std::size_t>(max_stage_));
  recorded_.assign(horizon + 1, 0);
}

std::size_t SupLinUcbSelector::index(std::size_t provider, int stage) const {
  if (provider >= providers_ || stage < 1 || stage > max_stage_) {
    throw ValidationError("provider/stage index out of range");
  }
  return provider * static_cast<std::size_t>(max_stage_) + static_cast<std::size_t>(stage - 1);
}

const StageModel& SupLinUcbSelector::model(std::size_t provider, int stage) const {
  return models_[index(provider, stage)];
}

const std::vector<std::size_t>& SupLinUcbSelector::stage_exploit_rounds(int stage) const {
  if (stage < 1 || stage > max_stage_) throw ValidationError("stage out of range");
  return stage_exploit_rounds_[static_cast<std::size_t>(stage - 1)];
}

std::size_t SupLinUcbSelector::stage_exploration_count(int stage) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < providers_; ++i) total += model(i, stage).rounds().size();
  return total;
}

SelectionDecision SupLinUcbSelector::select(const Vector& x,
                                            std::span<const double> virtual_costs,
                                            std::size_t t) const {
  if (virtual_costs.size() != providers_) {
    throw ValidationError("expected " + std::to_string(providers_) + " virtual costs");
  }
  if (x.size() != dim_) throw ValidationError("context dimension mismatch");
  if (t < 1 || t > horizon_) throw ValidationError("round index outside [1, T]");

  const std::size_t j = designated(t);
  const double exploit_threshold = 1.0 / std::sqrt(static_cast<double>(horizon_));

  SelectionDecision decision;
  std::vector<std::size_t> active(providers_);
  for (std::size_t i = 0; i < providers_; ++i) active[i] = i;

  for (int s = 1;; ++s) {
    StageTrace pass;
    pass.stage = s;
    pass.active = active;
    pass.estimates.reserve(active.size());
    for (std::size_t i : active) pass.estimates.push_back(base_linucb(model(i, s), x, alpha_));

    const double stage_threshold = std::ldexp(1.0, -s);
    double max_width = 0.0;
    double best_ovs = 0.0;
    std::size_t best_pos = 0;
    std::vector<double> ovs(active.size());
    bool designated_wide = false;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Estimate& e = pass.estimates[k];
      max_width = std::max(max_width, e.width);
      ovs[k] = e.value + e.width - virtual_costs[active[k]];
      if (k == 0 || ovs[k] > best_ovs) {
        best_ovs = ovs[k];
        best_pos = k;
      }
      if (active[k] == j && e.width > stage_threshold) designated_wide = true;
    }

    decision.stage = s;
    if (designated_wide) {
      decision.trace.push_back(std::move(pass));
      decision.winner = j;
      decision.branch = Branch::ForcedExploration;
      decision.learn = true;
      decision.allocated = true;
      return decision;
    }

    const bool all_tight = max_width <= exploit_threshold;
    const bool stage_done = max_width <= stage_threshold;
    if (!all_tight && stage_done && s < max_stage_) {
      std::vector<std::size_t> next;
      const double cutoff = best_ovs - 2.0 * std::ldexp(1.0, 1 - s);
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (ovs[k] >= cutoff) next.push_back(active[k]);
      }
      decision.trace.push_back(std::move(pass));
      active = std::move(next);
      continue;
    }

    decision.trace.push_back(std::move(pass));
    decision.winner = active[best_pos];
    decision.branch = all_tight ? Branch::PureExploit : Branch::WithinStageExploit;
    decision.learn = false;
    decision.allocated = !options_.participation_floor || best_ovs >= 0.0;
    return decision;
  }
}

void SupLinUcbSelector::record(const SelectionDecision& decision, std::size_t t, const Vector& x,
                               double reward) {
  if (t < 1 || t > horizon_) throw ValidationError("round index outside [1, T]");
  if (recorded_[t]) throw ValidationError("round " + std::to_string(t) + " already recorded");
  if (decision.learn != (decision.branch == Branch::ForcedExploration)) {
    throw ValidationError("only forced exploration decisions may learn");
  }
  recorded_[t] = 1;
  switch (decision.branch) {
    case Branch::ForcedExploration:
      models_[index(decision.winner, decision.stage)].add(t, x, reward);
      break;
    case Branch::PureExploit:
      pure_exploit_rounds_.push_back(t);
      break;
    case Branch::WithinStageExploit:
      stage_exploit_rounds_[static_cast<std::size_t>(decision.stage - 1)].push_back(t);
      break;
  }
}

}  // namespace trcm
