#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trcm/env.hpp"

namespace trcm {

struct AuctionOutcome {
  std::optional<std::size_t> winner;
  std::vector<double> surpluses;  // v_i - Psi_i(c_i)
  double payment = 0.0;
};

double virtual_cost(const CostDistribution& dist, double c);

/// Lowest-index argmax of v_i - Psi_i when that maximum is >= 0; no winner otherwise.
/// The returned payment is left at zero.
AuctionOutcome allocate_optimal(std::span<const double> values,
                                std::span<const double> virtual_costs);

inline constexpr double kBisectionTolerance = 1e-10;
inline constexpr int kBisectionMaxIterations = 200;

/// Highest cost report at which `winner` still wins against the others' fixed
/// reports: sup{s in [lo, hi] : v_w - Psi_w(s) >= max(0, max_{j != w} v_j - Psi_j(c_j))}.
/// `costs` holds every provider's report; the winner's own entry is ignored.
double critical_payment(std::span<const double> values, std::span<const CostDistribution> dists,
                        std::size_t winner, std::span<const double> costs);

/// Allocation plus critical payment for the winner, in one call.
AuctionOutcome run_optimal_auction(std::span<const double> values,
                                   std::span<const CostDistribution> dists,
                                   std::span<const double> costs);

}  // namespace trcm
