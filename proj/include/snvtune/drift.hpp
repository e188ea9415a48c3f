// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "snvtune/random.hpp"

namespace snvtune {

/**
 * Spectral wandering of the optical resonance: an Ornstein-Uhlenbeck process
 * (slow wander, stationary std ou_sigma, correlation time ou_tau) plus
 * compound-Poisson jumps of N(0, jump_sigma) that relax with the same ou_tau.
 */
struct DriftProcess {
    double ou_tau_s = 900.0;
    double ou_sigma_GHz = 1.37;
    double jump_rate_per_s = 1.0 / 300.0;
    double jump_sigma_GHz = 0.2;
    double state_GHz = 0.0;

    void validate() const;

    /// sqrt(ou_sigma^2 + jump_rate * jump_sigma^2 * ou_tau / 2).
    [[nodiscard]] double stationary_std() const noexcept;
};

/// Advances the process by dt (exact in distribution) and returns the new offset.
double step_drift(DriftProcess& p, double dt_s, Rng& rng);

/// Draws the state from the stationary distribution (Gaussian approximation).
void draw_stationary(DriftProcess& p, Rng& rng);

}  // namespace snvtune
