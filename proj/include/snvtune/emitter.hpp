// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "snvtune/actuator.hpp"
#include "snvtune/geometry.hpp"
#include "snvtune/strain.hpp"

#include <optional>
#include <string>

namespace snvtune {

/// Strain-response parameters shared by all emitters of one sample.
struct PhysicsParams {
    double nu0_GHz = 484000.0;  ///< unstrained mean ZPL frequency
    SpinOrbit spin_orbit{850.0, 3000.0};
    StrainSusceptibilities ground{0.25e6, -0.45e6, 0.787e6, -0.562e6};
    StrainSusceptibilities excited{0.05e6, -1.45e6, 0.956e6, -2.555e6};

    void validate() const;
};

/// One color center. `position` is empty for an emitter in the unstrained bulk.
struct EmitterModel {
    std::string id;
    Orientation orientation = Orientation::p111;
    std::optional<BeamPosition> position;
    double nu0_GHz = 0.0;  ///< unstrained C-transition frequency of this center
    double fwhm0_MHz = 100.0;
    double peak_rate_cps = 20000.0;
    double background_rate_cps = 200.0;
    double broadening_slope_MHz_per_GHz = 3.42;
    PhysicsParams physics;

    [[nodiscard]] bool in_bulk() const noexcept { return !position.has_value(); }
    void validate() const;
};

/// Lab-frame strain seen by the emitter at bias V (zero in the bulk).
[[nodiscard]] StrainTensor emitter_lab_strain(const EmitterModel& emitter,
                                              const DeviceModel& device, double V);

/// Full level response of the emitter at bias V.
[[nodiscard]] LevelResponse emitter_levels(const EmitterModel& emitter, const DeviceModel& device,
                                           double V);

/**
 * C-transition shift nu_c(V) - nu_c(0) in GHz:
 * strain_at -> lab-to-defect rotation -> irreducible components (g, u) -> level_response.
 */
[[nodiscard]] double shift_from_voltage_chain(const EmitterModel& emitter,
                                              const DeviceModel& device, double V);

/// d(shift)/dV by central difference (one-sided at the voltage limits), GHz/V.
[[nodiscard]] double shift_slope(const EmitterModel& emitter, const DeviceModel& device, double V);

/**
 * Precomputed tuning curve of one emitter on one device.
 *
 * Strain is proportional to V^2, so the irreducible components at any bias are
 * the components at v_ref scaled by (V / v_ref)^2. Evaluating the curve then
 * costs two hypot calls; it agrees with shift_from_voltage_chain to round-off.
 */
class EmitterTuning {
public:
    EmitterTuning(const EmitterModel& emitter, const DeviceModel& device);

    /// nu_c(V) - nu_c(0), GHz. V must lie in [0, v_max].
    [[nodiscard]] double shift(double V) const;

    /// Analytic d(shift)/dV, GHz/V.
    [[nodiscard]] double slope(double V) const;

    [[nodiscard]] double v_max() const noexcept { return v_max_; }

private:
    IrreducibleStrain unit_g_;
    IrreducibleStrain unit_u_;
    SpinOrbit so_;
    double v_ref_ = 1.0;
    double v_max_ = 0.0;
};

}  // namespace snvtune
