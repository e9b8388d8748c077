#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trcm/env.hpp"

namespace trcm {

/// Clairvoyant pick: lowest-index argmax of v_i - Psi_i if that is >= 0.
std::optional<std::size_t> oracle_choice(std::span<const double> values,
                                         std::span<const double> virtual_costs);

/// Same with linear values v_i = theta_i' x.
std::optional<std::size_t> oracle_choice(std::span<const Vector> thetas, const Vector& x,
                                         std::span<const double> virtual_costs);

/// Oracle expected surplus (0 when it abstains) minus the chosen provider's
/// expected surplus (0 when none is chosen).
double instantaneous_regret(std::span<const double> values,
                            std::span<const double> virtual_costs,
                            std::optional<std::size_t> chosen);

double instantaneous_regret(std::span<const Vector> thetas, const Vector& x,
                            std::span<const double> virtual_costs,
                            std::optional<std::size_t> chosen);

}  // namespace trcm
