// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectroscopy.hpp
 * @brief Photoluminescence-excitation (PLE) scan simulation.
 *
 * Detunings are measured from the emitter's unstrained C-transition, so a
 * strained emitter appears at detuning shift(V). The homogeneous line is a
 * unit-peak Lorentzian whose width grows linearly with |shift|; counts per
 * point are Poisson with mean (peak * L + background) * dwell.
 */

#pragma once

#include "snvtune/actuator.hpp"
#include "snvtune/emitter.hpp"
#include "snvtune/random.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace snvtune {

struct ScanRecord {
    std::vector<double> detunings_GHz;
    std::vector<std::int64_t> counts;
    std::vector<double> expected;  ///< noise-free mean counts per point (may be empty)
    double dwell_s = 0.0;
    double bias_V = 0.0;
    std::uint64_t seed = 0;
    std::string emitter_id;

    /// Equal lengths, strictly monotone detunings, non-negative counts.
    void validate() const;
};

enum class SamplingMode { poisson, expected_value };

/// fwhm0 + slope * |shift|, MHz.
[[nodiscard]] double effective_linewidth(const EmitterModel& emitter, double shift_GHz);

/// Expected count rate (1/s) with the laser `laser_detuning_GHz` from the unstrained line
/// and the resonance at `resonance_GHz`.
[[nodiscard]] double ple_rate(const EmitterModel& emitter, double laser_detuning_GHz,
                              double resonance_GHz, double fwhm_MHz) noexcept;

/**
 * One PLE scan at bias V. In SamplingMode::expected_value the counts column is
 * the rounded mean and `expected` holds the exact means.
 * Throws RangeError for V outside the actuator limits, InputError for dwell <= 0
 * or non-monotone detunings.
 */
[[nodiscard]] ScanRecord simulate_ple(const EmitterModel& emitter, const DeviceModel& device,
                                      double V, std::span<const double> detunings_GHz,
                                      double dwell_s, std::uint64_t seed,
                                      SamplingMode mode = SamplingMode::poisson);

/// Evenly spaced grid of `n` detunings over [center - half_span, center + half_span].
[[nodiscard]] std::vector<double> detuning_grid(double center_GHz, double half_span_GHz,
                                                std::size_t n);

}  // namespace snvtune
