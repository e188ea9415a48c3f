// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/spectroscopy.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/lineshape.hpp"

#include <cmath>

namespace snvtune {

void ScanRecord::validate() const {
    if (detunings_GHz.size() != counts.size()) {
        throw InputError("scan record: detuning and count columns differ in length");
    }
    if (!expected.empty() && expected.size() != counts.size()) {
        throw InputError("scan record: expected column length mismatch");
    }
    for (std::size_t i = 1; i < detunings_GHz.size(); ++i) {
        if (!(detunings_GHz[i] > detunings_GHz[i - 1])) {
            throw InputError("scan record: detunings must be strictly increasing");
        }
    }
    for (auto c : counts) {
        if (c < 0) throw InputError("scan record: negative count");
    }
}

double effective_linewidth(const EmitterModel& emitter, double shift_GHz) {
    return emitter.fwhm0_MHz + emitter.broadening_slope_MHz_per_GHz * std::abs(shift_GHz);
}

double ple_rate(const EmitterModel& emitter, double laser_detuning_GHz, double resonance_GHz,
                double fwhm_MHz) noexcept {
    return emitter.peak_rate_cps * lorentzian(laser_detuning_GHz - resonance_GHz, 1e-3 * fwhm_MHz) +
           emitter.background_rate_cps;
}

ScanRecord simulate_ple(const EmitterModel& emitter, const DeviceModel& device, double V,
                        std::span<const double> detunings_GHz, double dwell_s,
                        std::uint64_t seed, SamplingMode mode) {
    if (!(dwell_s > 0.0)) throw InputError("dwell time must be > 0");
    const double shift = shift_from_voltage_chain(emitter, device, V);
    const double fwhm = effective_linewidth(emitter, shift);

    ScanRecord rec;
    rec.detunings_GHz.assign(detunings_GHz.begin(), detunings_GHz.end());
    rec.dwell_s = dwell_s;
    rec.bias_V = V;
    rec.seed = seed;
    rec.emitter_id = emitter.id;
    rec.counts.reserve(detunings_GHz.size());
    rec.expected.reserve(detunings_GHz.size());

    Rng rng(seed);
    for (double d : detunings_GHz) {
        const double mean = ple_rate(emitter, d, shift, fwhm) * dwell_s;
        rec.expected.push_back(mean);
        rec.counts.push_back(mode == SamplingMode::poisson ? poisson(rng, mean)
                                                           : std::llround(mean));
    }
    rec.validate();
    return rec;
}

std::vector<double> detuning_grid(double center_GHz, double half_span_GHz, std::size_t n) {
    if (n < 2) throw InputError("detuning grid needs at least two points");
    if (!(half_span_GHz > 0.0)) throw InputError("detuning grid half-span must be > 0");
    std::vector<double> grid(n);
    const double step = 2.0 * half_span_GHz / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = center_GHz - half_span_GHz + step * static_cast<double>(i);
    }
    return grid;
}

}  // namespace snvtune
