// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file stabilization.hpp
 * @brief Closed-loop strain stabilization of a drifting optical resonance.
 *
 * Every frame of the update clock (default 5 Hz) runs, in order:
 *   1. gate-modulated lock-in probe at the target frequency,
 *   2. charge-resonance check at the target frequency (with retries),
 *   3. if the check passed and a PLE scan is in progress, one PLE point,
 *   4. PID update of the DC bias from the lock-in error.
 * The resonance wanders according to a DriftProcess and responds to the bias
 * through the emitter's strain tuning curve. Scans are spread evenly over the
 * run and fitted, giving the fitted-center series whose spread measures the
 * frequency stability. A feedback run starts with the line acquired: the
 * initial bias puts the drifted resonance on target. With feedback disabled the bias is held at the
 * operating point and scans run back to back at the dwell cadence without
 * lock-in or CR overhead.
 */

#pragma once

#include "snvtune/control.hpp"
#include "snvtune/fit.hpp"
#include "snvtune/spectroscopy.hpp"

#include <cstdint>
#include <vector>

namespace snvtune {

struct ScanPlan {
    int n_scans = 50;
    double half_span_GHz = 6.0;
    int points = 241;
    double dwell_s = 0.02;
    LineShape shape = LineShape::voigt;

    void validate() const;
};

struct StabilizationConfig {
    double duration_s = 7.0 * 3600.0;
    bool feedback = true;
    double target_shift_GHz = -36.0;  ///< lock point, relative to the unstrained line
    DriftProcess drift;
    LockInConfig lockin;
    PIDConfig pid;
    CRCheckConfig cr;
    ScanPlan scan;
    SamplingMode sampling = SamplingMode::poisson;

    void validate() const;
};

struct UpdateRecord {
    double time_s = 0.0;
    double dc_voltage_V = 0.0;
    double error_GHz_estimate = 0.0;
    bool cr_pass = false;
    int cr_attempts = 0;
    double true_detuning_GHz = 0.0;  ///< resonance - target at the start of the frame
};

struct ScanFitRecord {
    double time_s = 0.0;  ///< scan start
    double fitted_center_GHz = 0.0;  ///< relative to the target
    double center_stderr_GHz = 0.0;
    double fwhm_MHz = 0.0;
    bool converged = false;
};

struct FeedbackLog {
    bool feedback = true;
    double target_GHz = 0.0;
    double operating_voltage_V = 0.0;
    std::vector<UpdateRecord> updates;
    std::vector<ScanFitRecord> scans;
    std::vector<double> scan_detunings_GHz;        ///< laser offset from target, per point
    std::vector<std::vector<double>> scan_counts;  ///< one row per scan
};

/// Bias in [lo, hi] at which the emitter sits at `target_shift_GHz`; SetupError if unreachable.
[[nodiscard]] double solve_operating_voltage(const EmitterTuning& tuning, double target_shift_GHz,
                                             double lo_V, double hi_V);

/// Throws SetupError on inconsistent configuration before any simulation.
[[nodiscard]] FeedbackLog run_stabilization(const StabilizationConfig& cfg,
                                            const EmitterModel& emitter, const DeviceModel& device,
                                            std::uint64_t seed);

struct StabilizationSummary {
    int n_scans = 0;
    int n_converged = 0;
    double center_std_GHz = 0.0;     ///< sample std of converged fitted centers
    double center_mean_GHz = 0.0;
    double mean_fwhm_MHz = 0.0;      ///< mean FWHM of the individual fits
    double summed_fwhm_MHz = 0.0;    ///< FWHM of the fit to the summed counts
    double summed_fwhm_stderr_MHz = 0.0;
    double cr_pass_fraction = 0.0;
};

[[nodiscard]] StabilizationSummary summarize(const FeedbackLog& log, LineShape shape);

}  // namespace snvtune
