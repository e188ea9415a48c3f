// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/control.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/lineshape.hpp"
#include "snvtune/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace snvtune {

EmitterState::EmitterState(const EmitterModel& emitter, const EmitterTuning& tuning,
                           double dc_voltage_V, double drift_GHz)
    : emitter_(&emitter),
      tuning_(&tuning),
      dc_voltage_V_(dc_voltage_V),
      drift_GHz_(drift_GHz),
      fwhm_MHz_(effective_linewidth(emitter, tuning.shift(std::clamp(dc_voltage_V, 0.0, tuning.v_max())))) {}

double EmitterState::resonance(double V) const {
    return tuning_->shift(std::clamp(V, 0.0, tuning_->v_max())) + drift_GHz_;
}

double EmitterState::rate(double laser_GHz, double V) const {
    return ple_rate(*emitter_, laser_GHz, resonance(V), fwhm_MHz_);
}

void LockInConfig::validate() const {
    if (!(mod_amp_V > 0.0)) throw DomainError("lock-in mod_amp must be > 0");
    if (periods_per_probe < 1) throw DomainError("lock-in periods_per_probe must be >= 1");
    if (bins_per_period < 4) throw DomainError("lock-in bins_per_period must be >= 4");
    if (!(probe_duration_s > 0.0)) throw DomainError("lock-in probe_duration must be > 0");
}

namespace {

struct PhaseBins {
    std::vector<double> sine;
    std::vector<double> offset_GHz;  // resonance(V_dc + A sin) - resonance(V_dc)
    double exposure_s = 0.0;         // per bin, summed over all periods
};

PhaseBins phase_bins(const EmitterState& s, const LockInConfig& cfg) {
    PhaseBins b;
    const int n = cfg.bins_per_period;
    b.sine.resize(static_cast<std::size_t>(n));
    b.offset_GHz.resize(static_cast<std::size_t>(n));
    const double centre = s.resonance();
    for (int k = 0; k < n; ++k) {
        const double phase = 2.0 * std::numbers::pi * (k + 0.5) / n;
        b.sine[std::size_t(k)] = std::sin(phase);
        b.offset_GHz[std::size_t(k)] = s.resonance(s.dc_voltage() + cfg.mod_amp_V * std::sin(phase)) - centre;
    }
    b.exposure_s = cfg.probe_duration_s / n;
    return b;
}

// Expected counts in bin k when the resonance (at V_dc) sits `detuning` above the laser.
double bin_mean(const EmitterState& s, const PhaseBins& b, std::size_t k, double detuning) {
    const auto& em = s.emitter();
    const double rate = em.peak_rate_cps * lorentzian(detuning + b.offset_GHz[k], 1e-3 * s.fwhm_MHz()) +
                        em.background_rate_cps;
    return rate * b.exposure_s;
}

double response(const EmitterState& s, const PhaseBins& b, double detuning) {
    double x = 0.0;
    for (std::size_t k = 0; k < b.sine.size(); ++k) x += bin_mean(s, b, k, detuning) * b.sine[k];
    return x;
}

double invert_response(const EmitterState& s, const PhaseBins& b, double signal) {
    const double f = 1e-3 * s.fwhm_MHz();
    constexpr int kGrid = 80;
    const double span = 2.0 * f;
    double arg_min = 0.0, arg_max = 0.0;
    double r_min = response(s, b, 0.0), r_max = r_min;
    for (int i = 0; i <= kGrid; ++i) {
        const double d = -span + 2.0 * span * i / kGrid;
        const double r = response(s, b, d);
        if (r < r_min) { r_min = r; arg_min = d; }
        if (r > r_max) { r_max = r; arg_max = d; }
    }
    if (signal <= r_min) return arg_min;
    if (signal >= r_max) return arg_max;
    // Monotone between the two extrema; bisect.
    double lo = std::min(arg_min, arg_max), hi = std::max(arg_min, arg_max);
    const bool increasing = arg_max > arg_min;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * f; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool below = response(s, b, mid) < signal;
        if (below == increasing) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double lockin_response(const EmitterState& state, double detuning_GHz, const LockInConfig& cfg) {
    return response(state, phase_bins(state, cfg), detuning_GHz);
}

LockInResult lockin_error(const EmitterState& state, double target_GHz, const LockInConfig& cfg,
                          Rng* rng) {
    const PhaseBins bins = phase_bins(state, cfg);
    const double detuning = state.resonance() - target_GHz;
    LockInResult out;
    for (std::size_t k = 0; k < bins.sine.size(); ++k) {
        const double mean = bin_mean(state, bins, k, detuning);
        // Counts of one phase bin summed over all periods are again Poisson.
        const double n = rng ? static_cast<double>(poisson(*rng, mean)) : mean;
        out.demodulated += n * bins.sine[k];
        out.total_counts += n;
    }
    out.has_information = out.total_counts > 0.0;
    if (!out.has_information) return out;
    out.error = cfg.normalization == LockInNormalization::raw
                    ? out.demodulated
                    : invert_response(state, bins, out.demodulated);
    return out;
}

void CRCheckConfig::validate() const {
    if (!(probe_duration_s > 0.0)) throw DomainError("CR probe_duration must be > 0");
    if (photon_threshold < 1) throw DomainError("CR photon_threshold must be >= 1");
    if (max_attempts < 1) throw DomainError("CR max_attempts must be >= 1");
}

CRCheckResult cr_check(EmitterState& state, const CRCheckConfig& cfg, double target_GHz, Rng& rng,
                       DriftProcess* drift) {
    CRCheckResult out;
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        if (attempt > 1 && drift != nullptr) {
            state.set_drift(step_drift(*drift, cfg.probe_duration_s, rng));
        }
        out.attempts = attempt;
        out.last_counts = poisson(rng, state.rate(target_GHz, state.dc_voltage()) * cfg.probe_duration_s);
        if (out.last_counts >= cfg.photon_threshold) {
            out.passed = true;
            break;
        }
    }
    return out;
}

double poisson_tail(double mean, int threshold) {
    if (threshold <= 0) return 1.0;
    if (!(mean > 0.0)) return 0.0;
    // 1 - sum_{k < threshold} e^-m m^k / k!
    double term = std::exp(-mean);
    double cdf = term;
    for (int k = 1; k < threshold; ++k) {
        term *= mean / k;
        cdf += term;
    }
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

void PIDConfig::validate() const {
    if (!(output_min_V < output_max_V)) throw DomainError("PID output_min must be < output_max");
    if (!(update_rate_Hz > 0.0)) throw DomainError("PID update_rate must be > 0");
    if (!(integral_limit > 0.0)) throw DomainError("PID integral_limit must be > 0");
    if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd)) {
        throw DomainError("PID gains must be finite");
    }
}

double pid_update(PIDState& s, double error, const PIDConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw InputError("PID time step must be > 0");
    const double derivative = s.has_prev ? (error - s.prev_error) / dt : 0.0;
    s.prev_error = error;
    s.has_prev = true;

    const double candidate = std::clamp(s.integral + error * dt, -cfg.integral_limit, cfg.integral_limit);
    const double rest = s.bias_V + cfg.kp * error + cfg.kd * derivative;
    const double unclamped = rest + cfg.ki * candidate;
    const bool high = unclamped > cfg.output_max_V && cfg.ki * error > 0.0;
    const bool low = unclamped < cfg.output_min_V && cfg.ki * error < 0.0;
    if (high || low) {
        // Integrate only up to the point where the output meets the bound.
        const double edge = ((high ? cfg.output_max_V : cfg.output_min_V) - rest) / cfg.ki;
        s.integral = std::clamp(edge, std::min(s.integral, candidate), std::max(s.integral, candidate));
    } else {
        s.integral = candidate;
    }
    const double v = s.bias_V + cfg.kp * error + cfg.ki * s.integral + cfg.kd * derivative;
    s.output_V = std::clamp(v, cfg.output_min_V, cfg.output_max_V);
    return s.output_V;
}

}  // namespace snvtune
