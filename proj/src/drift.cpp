// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/drift.hpp"

#include "snvtune/errors.hpp"

#include <cmath>

namespace snvtune {

void DriftProcess::validate() const {
    if (!(ou_tau_s > 0.0) || !std::isfinite(ou_tau_s)) throw DomainError("ou_tau must be > 0");
    if (!(ou_sigma_GHz >= 0.0) || !(jump_sigma_GHz >= 0.0) || !(jump_rate_per_s >= 0.0)) {
        throw DomainError("drift sigmas and jump rate must be >= 0");
    }
    if (!std::isfinite(stationary_std())) throw DomainError("drift stationary std is not finite");
}

double DriftProcess::stationary_std() const noexcept {
    return std::sqrt(ou_sigma_GHz * ou_sigma_GHz +
                     0.5 * jump_rate_per_s * jump_sigma_GHz * jump_sigma_GHz * ou_tau_s);
}

double step_drift(DriftProcess& p, double dt_s, Rng& rng) {
    if (!(dt_s > 0.0)) throw InputError("drift time step must be > 0");
    const double decay = std::exp(-dt_s / p.ou_tau_s);
    double x = p.state_GHz * decay;
    if (p.ou_sigma_GHz > 0.0) {
        const double sd = p.ou_sigma_GHz * std::sqrt(-std::expm1(-2.0 * dt_s / p.ou_tau_s));
        x += sd * std::normal_distribution<double>(0.0, 1.0)(rng);
    }
    if (p.jump_rate_per_s > 0.0 && p.jump_sigma_GHz > 0.0) {
        const std::int64_t jumps = poisson(rng, p.jump_rate_per_s * dt_s);
        std::uniform_real_distribution<double> when(0.0, dt_s);
        std::normal_distribution<double> size(0.0, p.jump_sigma_GHz);
        for (std::int64_t k = 0; k < jumps; ++k) {
            // A jump at time u inside the step has relaxed for dt - u by its end.
            const double u = when(rng);
            x += size(rng) * std::exp(-(dt_s - u) / p.ou_tau_s);
        }
    }
    p.state_GHz = x;
    return x;
}

void draw_stationary(DriftProcess& p, Rng& rng) {
    p.state_GHz = p.stationary_std() * std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace snvtune
