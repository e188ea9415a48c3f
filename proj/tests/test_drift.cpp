// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/drift.hpp"
#include "snvtune/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace snvtune;

TEST_CASE("noiseless process decays exponentially") {
    DriftProcess p;
    p.ou_sigma_GHz = 0.0;
    p.jump_rate_per_s = 0.0;
    p.state_GHz = 2.0;
    Rng rng(1);
    double t = 0.0;
    for (int i = 0; i < 20; ++i) {
        t += 45.0;
        const double x = step_drift(p, 45.0, rng);
        CHECK(x == doctest::Approx(2.0 * std::exp(-t / p.ou_tau_s)).epsilon(1e-12));
    }
}

TEST_CASE("stationary std against a long Monte-Carlo run") {
    DriftProcess p;
    p.jump_sigma_GHz = 0.8;  // make the jump share visible
    Rng rng(99);
    draw_stationary(p, rng);
    const double dt = p.ou_tau_s;
    const int n = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = step_drift(p, dt, rng);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    const double expect = std::sqrt(p.ou_sigma_GHz * p.ou_sigma_GHz +
                                    p.jump_rate_per_s * p.jump_sigma_GHz * p.jump_sigma_GHz * p.ou_tau_s / 2.0);
    CHECK(p.stationary_std() == doctest::Approx(expect));
    CHECK(std::abs(sd - expect) / expect < 0.05);
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("conditional mean relaxes with ou_tau") {
    const double dt = 300.0;
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        DriftProcess p;
        p.state_GHz = 3.0;
        Rng rng(derive_seed(7, std::uint64_t(i)));
        s += step_drift(p, dt, rng);
    }
    const DriftProcess ref;
    const double sd_one = ref.stationary_std() * std::sqrt(1.0 - std::exp(-2.0 * dt / ref.ou_tau_s));
    CHECK(std::abs(s / n - 3.0 * std::exp(-dt / ref.ou_tau_s)) < 4.0 * sd_one / std::sqrt(double(n)));
}

TEST_CASE("determinism and validation") {
    DriftProcess a, b;
    Rng ra(4), rb(4);
    for (int i = 0; i < 100; ++i) CHECK(step_drift(a, 0.2, ra) == step_drift(b, 0.2, rb));
    Rng rng(1);
    CHECK_THROWS_AS(step_drift(a, 0.0, rng), InputError);
    DriftProcess bad;
    bad.ou_tau_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = DriftProcess{};
    bad.ou_sigma_GHz = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_NOTHROW(DriftProcess{}.validate());
}
