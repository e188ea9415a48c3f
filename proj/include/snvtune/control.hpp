// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file control.hpp
 * @brief Gate-modulated lock-in error extraction, charge-resonance check and PID.
 *
 * Frequencies are detunings in GHz from the emitter's unstrained C-transition;
 * the probe laser sits at `target_GHz`.
 */

#pragma once

#include "snvtune/drift.hpp"
#include "snvtune/emitter.hpp"
#include "snvtune/random.hpp"

#include <cstdint>
#include <vector>

namespace snvtune {

/// Instantaneous optical state of one emitter held at DC bias `dc_voltage_V`.
class EmitterState {
public:
    EmitterState(const EmitterModel& emitter, const EmitterTuning& tuning, double dc_voltage_V,
                 double drift_GHz);

    [[nodiscard]] double dc_voltage() const noexcept { return dc_voltage_V_; }
    [[nodiscard]] double drift() const noexcept { return drift_GHz_; }
    [[nodiscard]] double fwhm_MHz() const noexcept { return fwhm_MHz_; }
    [[nodiscard]] const EmitterModel& emitter() const noexcept { return *emitter_; }
    [[nodiscard]] const EmitterTuning& tuning() const noexcept { return *tuning_; }

    void set_drift(double drift_GHz) noexcept { drift_GHz_ = drift_GHz; }

    /// Resonance at instantaneous bias V (clamped to the actuator range), GHz.
    [[nodiscard]] double resonance(double V) const;
    [[nodiscard]] double resonance() const { return resonance(dc_voltage_V_); }

    /// Expected count rate (1/s) with the laser at `laser_GHz` and instantaneous bias V.
    [[nodiscard]] double rate(double laser_GHz, double V) const;

private:
    const EmitterModel* emitter_;
    const EmitterTuning* tuning_;
    double dc_voltage_V_;
    double drift_GHz_;
    double fwhm_MHz_;
};

enum class LockInNormalization {
    model,  ///< invert the modelled first-harmonic response: error in GHz
    raw,    ///< demodulated counts, no model; loop gains absorb the units
};

struct LockInConfig {
    double mod_amp_V = 0.1;
    int periods_per_probe = 5;
    int bins_per_period = 16;
    double probe_duration_s = 0.05;
    LockInNormalization normalization = LockInNormalization::model;

    void validate() const;
};

struct LockInResult {
    double error = 0.0;          ///< GHz (model) or counts (raw); resonance - target
    double demodulated = 0.0;    ///< sum_k counts_k sin(phase_k)
    double total_counts = 0.0;
    bool has_information = false;  ///< false when no photon was detected
};

/**
 * Modulates the bias as V_dc + mod_amp sin(phase), bins photon counts by phase
 * and demodulates at the first harmonic. With `rng == nullptr` counts are the
 * expected values (noise-free mode).
 *
 * Model normalization maps the demodulated signal back to a detuning through
 * the modelled response curve, restricted to its monotone branch around zero.
 * Near resonance this is the signal divided by
 * d(rate)/d(nu) * d(nu)/dV * mod_amp; outside the branch the estimate
 * saturates at the branch edge, and far in the Lorentzian tails it decays.
 */
[[nodiscard]] LockInResult lockin_error(const EmitterState& state, double target_GHz,
                                        const LockInConfig& cfg, Rng* rng);

/// Expected demodulated signal for a given resonance-minus-target detuning.
[[nodiscard]] double lockin_response(const EmitterState& state, double detuning_GHz,
                                     const LockInConfig& cfg);

struct CRCheckConfig {
    double probe_duration_s = 0.01;
    int photon_threshold = 20;
    int max_attempts = 5;

    void validate() const;
};

struct CRCheckResult {
    bool passed = false;
    int attempts = 0;
    std::int64_t last_counts = 0;
};

/**
 * Counts photons with the laser at the target for probe_duration; passes once
 * counts >= threshold. Failed attempts are retried up to max_attempts; if
 * `drift` is given the state drifts by probe_duration between attempts.
 */
[[nodiscard]] CRCheckResult cr_check(EmitterState& state, const CRCheckConfig& cfg,
                                     double target_GHz, Rng& rng, DriftProcess* drift = nullptr);

/// P(Poisson(mean) >= threshold).
[[nodiscard]] double poisson_tail(double mean, int threshold);

struct PIDConfig {
    double kp = 0.22;  ///< V / GHz
    double ki = 2.7;   ///< V / (GHz s)
    double kd = 0.0;   ///< V s / GHz
    double output_min_V = 0.0;
    double output_max_V = 90.0;
    double update_rate_Hz = 5.0;
    double integral_limit = 10.0;  ///< |integral of error| bound, GHz s

    void validate() const;
};

struct PIDState {
    double bias_V = 0.0;  ///< output with zero error and zero integral
    double integral = 0.0;
    double prev_error = 0.0;
    bool has_prev = false;
    double output_V = 0.0;
};

/**
 * Positional PID: V = bias + kp e + ki I + kd de/dt, clamped to
 * [output_min, output_max]. The derivative uses the change in the measured
 * error and is skipped on the first sample, so there is no derivative kick.
 * The integral is clamped to +-integral_limit and stops growing once the output
 * reaches the bound in the direction the error pushes (anti-windup).
 */
double pid_update(PIDState& state, double error_GHz, const PIDConfig& cfg, double dt_s);

}  // namespace snvtune
