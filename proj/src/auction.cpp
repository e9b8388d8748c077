#include "trcm/auction.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "trcm/error.hpp"

namespace trcm {

double virtual_cost(const CostDistribution& dist, double c) { return dist.virtual_cost(c); }

AuctionOutcome allocate_optimal(std::span<const double> values,
                                std::span<const double> virtual_costs) {
  if (values.empty()) throw ValidationError("allocation needs at least one provider");
  if (values.size() != virtual_costs.size()) {
    throw ValidationError("values and virtual costs differ in length");
  }
  AuctionOutcome out;
  out.surpluses.resize(values.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.surpluses[i] = values[i] - virtual_costs[i];
    if (out.surpluses[i] > out.surpluses[best]) best = i;
  }
  if (out.surpluses[best] >= 0.0) out.winner = best;
  return out;
}

double critical_payment(std::span<const double> values, std::span<const CostDistribution> dists,
                        std::size_t winner, std::span<const double> costs) {
  const std::size_t m = values.size();
  if (m == 0 || dists.size() != m || costs.size() != m) {
    throw ValidationError("critical payment inputs must be non-empty and equal length");
  }
  if (winner >= m) throw ValidationError("winner index " + std::to_string(winner) + " out of range");

  double benchmark = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == winner) continue;
    benchmark = std::max(benchmark, values[j] - dists[j].virtual_cost(costs[j]));
  }
  const CostDistribution& own = dists[winner];
  const double v = values[winner];
  auto competitive = [&](double s) { return v - own.virtual_cost(s) >= benchmark; };

  if (competitive(own.hi())) return own.hi();
  double feasible = own.lo();
  if (!competitive(feasible)) {
    throw ValidationError("provider " + std::to_string(winner) +
                          " cannot win at any report; it is not the auction winner");
  }
  double infeasible = own.hi();
  for (int it = 0; it < kBisectionMaxIterations && infeasible - feasible > kBisectionTolerance;
       ++it) {
    const double mid = 0.5 * (feasible + infeasible);
    if (competitive(mid)) {
      feasible = mid;
    } else {
      infeasible = mid;
    }
  }
  return feasible;
}

AuctionOutcome run_optimal_auction(std::span<const double> values,
                                   std::span<const CostDistribution> dists,
                                   std::span<const double> costs) {
  if (dists.size() != values.size() || costs.size() != values.size()) {
    throw ValidationError("auction inputs differ in length");
  }
  std::vector<double> psi(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) psi[i] = dists[i].virtual_cost(costs[i]);
  AuctionOutcome out = allocate_optimal(values, psi);
  if (out.winner) out.payment = critical_payment(values, dists, *out.winner, costs);
  return out;
}

}  // namespace trcm
