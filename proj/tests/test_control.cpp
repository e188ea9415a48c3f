// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/control.hpp"
#include "snvtune/errors.hpp"
#include "snvtune/lineshape.hpp"
#include "snvtune/spectroscopy.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace snvtune;

namespace {

struct Fixture {
    DeviceModel device;
    EmitterModel emitter;
    EmitterTuning tuning;
    Fixture() : emitter(make()), tuning(emitter, device) {}
    static EmitterModel make() {
        EmitterModel e;
        e.id = "A1";
        e.position = BeamPosition{0.0, 0.0, 0.06};
        return e;
    }
};

// Expected demodulated signal by direct quadrature over the modulation phase,
// independent of the phase binning used by the lock-in.
double modulated_signal(const Fixture& fx, double V_dc, double detuning, const LockInConfig& cfg) {
    const double fwhm = 1e-3 * effective_linewidth(fx.emitter, fx.tuning.shift(V_dc));
    const double centre = fx.tuning.shift(V_dc);
    const int m = 20000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double ph = 2.0 * std::numbers::pi * (i + 0.5) / m;
        const double res = fx.tuning.shift(V_dc + cfg.mod_amp_V * std::sin(ph)) - centre + detuning;
        const double rate = fx.emitter.peak_rate_cps * lorentzian(res, fwhm) + fx.emitter.background_rate_cps;
        acc += rate * std::sin(ph);
    }
    return acc / m * cfg.probe_duration_s;
}

}  // namespace

TEST_CASE("lock-in error at resonance is zero") {
    const Fixture fx;
    const LockInConfig cfg;
    const EmitterState st(fx.emitter, fx.tuning, 78.0, 0.0);
    const auto r = lockin_error(st, st.resonance(), cfg, nullptr);
    REQUIRE(r.has_information);
    CHECK(std::abs(r.error) < 1e-8 * 1e-3 * st.fwhm_MHz());
    // The curvature of the tuning curve leaves a small even-harmonic residue in
    // the raw signal; the model inversion removes it.
    const double quarter = 0.25e-3 * st.fwhm_MHz();
    CHECK(std::abs(lockin_response(st, 0.0, cfg)) < 0.05 * std::abs(lockin_response(st, quarter, cfg)));
}

TEST_CASE("lock-in response is odd in detuning") {
    const Fixture fx;
    const LockInConfig cfg;
    const EmitterState st(fx.emitter, fx.tuning, 70.0, 0.0);
    for (double d : {0.01, 0.05, 0.2, 1.0}) {
        const double a = lockin_response(st, d, cfg);
        const double b = lockin_response(st, -d, cfg);
        CHECK(std::abs(a + b) < 0.02 * std::abs(a));
    }
}

TEST_CASE("lock-in signal against direct phase quadrature") {
    const Fixture fx;
    const LockInConfig cfg;
    const double V = 78.0;
    const EmitterState st(fx.emitter, fx.tuning, V, 0.0);
    const double fwhm = 1e-3 * st.fwhm_MHz();
    double peak = 0.0;
    for (double d = -fwhm; d <= fwhm; d += fwhm / 16) peak = std::max(peak, std::abs(modulated_signal(fx, V, d, cfg)));
    for (double d = -fwhm; d <= fwhm; d += fwhm / 8) {
        CHECK(std::abs(lockin_response(st, d, cfg) - modulated_signal(fx, V, d, cfg)) < 0.02 * peak);
    }

    // Small detunings: the estimate matches the truth, and so does the
    // first-order estimate from the quadrature slope.
    const double h = 1e-4 * fwhm;
    const double sens = (modulated_signal(fx, V, h, cfg) - modulated_signal(fx, V, -h, cfg)) / (2 * h);
    for (double frac : {0.02, 0.1, 0.25}) {
        for (double sgn : {1.0, -1.0}) {
            const double d = sgn * frac * fwhm;
            const auto r = lockin_error(st, st.resonance() - d, cfg, nullptr);
            CAPTURE(d);
            CHECK(r.error * d > 0.0);
            CHECK(std::abs(r.error - d) <= 0.2 * std::abs(d));
            const double linear = modulated_signal(fx, V, d, cfg) / sens;
            CHECK(std::abs(linear - d) <= 0.2 * std::abs(d));
        }
    }
}

TEST_CASE("lock-in estimate saturates far from resonance") {
    const Fixture fx;
    const LockInConfig cfg;
    const EmitterState st(fx.emitter, fx.tuning, 78.0, 0.0);
    const double fwhm = 1e-3 * st.fwhm_MHz();
    double largest = 0.0;
    for (double d : {2.0, 5.0, 20.0, 100.0, 1000.0}) {
        const auto r = lockin_error(st, st.resonance() - d * fwhm, cfg, nullptr);
        CHECK(r.error > 0.0);
        CHECK(r.error <= 2.0 * fwhm);
        largest = std::max(largest, r.error);
    }
    CHECK(largest <= 2.0 * fwhm);
}

TEST_CASE("lock-in without photons and with noise") {
    const Fixture fx;
    LockInConfig cfg;
    EmitterModel dark = fx.emitter;
    dark.peak_rate_cps = 0.0;
    dark.background_rate_cps = 0.0;
    const EmitterTuning tuning(dark, fx.device);
    const EmitterState st(dark, tuning, 60.0, 0.0);
    Rng rng(3);
    const auto r = lockin_error(st, 0.0, cfg, &rng);
    CHECK_FALSE(r.has_information);
    CHECK(r.total_counts == 0.0);

    const EmitterState lit(fx.emitter, fx.tuning, 78.0, 0.0);
    const double expected_total = lockin_error(lit, lit.resonance(), cfg, nullptr).total_counts;
    double s = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) s += lockin_error(lit, lit.resonance(), cfg, &rng).total_counts;
    CHECK(std::abs(s / n - expected_total) < 4.0 * std::sqrt(expected_total / n));

    cfg.mod_amp_V = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("CR check pass rate on resonance") {
    const Fixture fx;
    const CRCheckConfig cfg;
    EmitterState st(fx.emitter, fx.tuning, 78.0, 0.0);
    const double mean = st.rate(st.resonance(), 78.0) * cfg.probe_duration_s;
    const double p_one = poisson_tail(mean, cfg.photon_threshold);
    const double oracle = 1.0 - std::pow(1.0 - p_one, cfg.max_attempts);
    Rng rng(11);
    int passed = 0;
    for (int i = 0; i < 1000; ++i) passed += cr_check(st, cfg, st.resonance(), rng).passed ? 1 : 0;
    CHECK(oracle > 0.99);
    CHECK(passed / 1000.0 > 0.99);
}

TEST_CASE("CR check fails without emission") {
    const Fixture fx;
    EmitterModel dark = fx.emitter;
    dark.peak_rate_cps = 0.0;
    dark.background_rate_cps = 0.0;
    const EmitterTuning tuning(dark, fx.device);
    EmitterState st(dark, tuning, 50.0, 0.0);
    CRCheckConfig cfg;
    cfg.photon_threshold = 1;
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const auto r = cr_check(st, cfg, st.resonance(), rng);
        CHECK_FALSE(r.passed);
        CHECK(r.attempts == cfg.max_attempts);
    }
}

TEST_CASE("CR pass probability falls with detuning") {
    const Fixture fx;
    const CRCheckConfig cfg;
    EmitterState st(fx.emitter, fx.tuning, 78.0, 0.0);
    const double fwhm = 1e-3 * st.fwhm_MHz();
    double prev = 1.1;
    Rng rng(8);
    double prev_mc = 1.1;
    for (int i = 0; i <= 12; ++i) {
        const double d = 0.1 * i * fwhm;
        const double p1 = poisson_tail(st.rate(st.resonance() + d, 78.0) * cfg.probe_duration_s, cfg.photon_threshold);
        const double p = 1.0 - std::pow(1.0 - p1, cfg.max_attempts);
        CHECK(p <= prev);
        prev = p;
        int passed = 0;
        for (int k = 0; k < 2000; ++k) passed += cr_check(st, cfg, st.resonance() + d, rng).passed ? 1 : 0;
        const double mc = passed / 2000.0;
        CHECK(std::abs(mc - p) < 4.0 * std::sqrt(std::max(p * (1 - p), 1e-4) / 2000.0));
        CHECK(mc <= prev_mc + 0.03);
        prev_mc = mc;
    }
}

TEST_CASE("Poisson tail against a direct sum") {
    for (double m : {0.5, 5.0, 25.0, 80.0}) {
        for (int t : {0, 1, 3, 20, 60}) {
            double below = 0.0;
            for (int k = 0; k < t; ++k) below += std::exp(k * std::log(m) - m - std::lgamma(k + 1.0));
            CHECK(poisson_tail(m, t) == doctest::Approx(1.0 - below).epsilon(1e-9));
        }
    }
    CHECK(poisson_tail(0.0, 1) == 0.0);
    CHECK(poisson_tail(0.0, 0) == 1.0);
}

TEST_CASE("PID basics") {
    const PIDConfig cfg;
    PIDState s;
    s.bias_V = 50.0;
    CHECK(pid_update(s, 0.0, cfg, 0.2) == 50.0);
    CHECK(pid_update(s, 0.0, cfg, 0.2) == 50.0);

    PIDConfig p_only = cfg;
    p_only.ki = 0.0;
    p_only.kd = 0.0;
    PIDState q;
    q.bias_V = 40.0;
    for (int i = 0; i < 5; ++i) CHECK(pid_update(q, 2.0, p_only, 0.2) == doctest::Approx(40.0 + p_only.kp * 2.0));

    PIDConfig d_only = cfg;
    d_only.kp = 0.0;
    d_only.ki = 0.0;
    d_only.kd = 1.0;
    PIDState r;
    r.bias_V = 40.0;
    CHECK(pid_update(r, 5.0, d_only, 0.5) == 40.0);  // no kick on the first sample
    CHECK(pid_update(r, 6.0, d_only, 0.5) == doctest::Approx(42.0));

    PIDState c;
    c.bias_V = 89.0;
    CHECK(pid_update(c, 1000.0, cfg, 0.2) == cfg.output_max_V);
    CHECK(pid_update(c, -1000.0, cfg, 0.2) == cfg.output_min_V);
    CHECK_THROWS_AS(pid_update(c, 0.0, cfg, 0.0), InputError);
    PIDConfig bad = cfg;
    bad.output_min_V = 90.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("closed loop on a linear plant converges with the default gains") {
    const Fixture fx;
    const PIDConfig cfg;
    const double V0 = 78.0;
    const double gain = fx.tuning.slope(V0);  // GHz / V, negative for this emitter
    const double direction = gain < 0.0 ? 1.0 : -1.0;
    const double dt = 1.0 / cfg.update_rate_Hz;
    PIDState s;
    s.bias_V = V0;
    s.output_V = V0;
    double offset = 1.0;  // resonance - target with the bias at V0
    double err = offset;
    int n = 0;
    for (; n < 50 && std::abs(err) >= 0.010; ++n) {
        const double V = pid_update(s, direction * err, cfg, dt);
        err = offset + gain * (V - V0);
    }
    CAPTURE(gain);
    CHECK(std::abs(err) < 0.010);
    CHECK(n <= 50);
}

TEST_CASE("anti-windup recovers quickly after saturation") {
    PIDConfig cfg;
    cfg.output_max_V = 60.0;
    const double gain = -1.0, dt = 0.2;
    PIDState s;
    s.bias_V = 50.0;
    // The target needs 70 V: unreachable, so the loop saturates.
    auto error_at = [&](double V) { return 20.0 + gain * (V - 50.0); };
    double V = 50.0;
    int saturated = 0;
    for (int i = 0; i < 100; ++i) {
        V = pid_update(s, error_at(V), cfg, dt);
        if (V == cfg.output_max_V) ++saturated;
    }
    REQUIRE(saturated > 90);
    CHECK(std::abs(s.integral) < cfg.integral_limit);
    // Target becomes reachable at 55 V.
    auto new_error = [&](double v) { return 5.0 + gain * (v - 50.0); };
    int recover = 0;
    for (; recover < 500; ++recover) {
        V = pid_update(s, new_error(V), cfg, dt);
        if (std::abs(new_error(V)) < 0.01) break;
    }
    CHECK(recover <= 5 * saturated);
    CHECK(recover < 50);
}
