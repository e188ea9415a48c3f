// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file actuator.hpp
 * @brief Parametric electrostatic MEMS actuator: bias voltage -> lab-frame strain.
 *
 * The waveguide is modelled as an Euler-Bernoulli beam clamped at the hinge
 * (x = 0) and guided at the spring end (x = L). The spring end is pulled
 * out of plane by the parallel-plate force, so the deflection shape is
 * w(xi) ~ 3 xi^2 - 2 xi^3 with xi = x / L and the surface bending strain is
 * proportional to the curvature (1 - 2 xi) times the height above the neutral
 * axis. One global calibration point (v_ref -> eps_ref at the profile
 * maximum) fixes the scale; strain grows with V^2 like the electrostatic force.
 *
 * Beam coordinates are in micrometres: x in [0, l_waveguide] from the hinge,
 * y in [-w/2, w/2] across the beam, z in [-h/2, h/2] above the mid-plane.
 */

#pragma once

#include "snvtune/strain.hpp"

#include <array>

namespace snvtune {

/// Device dimensions (micrometres) and the mechanical constants of the beam material.
struct DeviceGeometry {
    double w_spring_um = 0.200;
    double w_waveguide_um = 0.250;
    double w_support_um = 0.250;
    double w_tp_um = 0.050;
    double d_support_um = 2.0;
    double l_waveguide_um = 20.0;
    double l_tp_um = 15.0;
    double gap_height_um = 2.5;
    double h_waveguide_um = 0.160;
    double youngs_modulus_GPa = 1050.0;
    double poisson_ratio = 0.2;

    void validate() const;
};

/// Voltage -> strain calibration. Ratios give yy, zz, yz, zx, xy as fractions of local e_xx.
struct ActuatorCalibration {
    double v_ref_V = 75.0;
    double eps_ref = 7e-5;
    std::array<double, 5> tensor_ratios{-0.2, -0.2, 0.0, 0.0, 0.0};
    double v_max_V = 90.0;

    void validate() const;
};

/// Resistive heating under pulsed bias: first-order relaxation between pulses.
struct ThermalModel {
    double cooldown_time_us = 1500.0;
    double max_pulse_us = 50.0;
    double heat_shift_coeff_GHz = 0.5;
    double relaxation_time_us = 400.0;
    double reference_voltage_V = 90.0;

    void validate() const;
};

struct DeviceModel {
    DeviceGeometry geometry;
    ActuatorCalibration calibration;
    ThermalModel thermal;

    void validate() const;
};

struct BeamPosition {
    double x_um = 0.0;
    double y_um = 0.0;
    double z_um = 0.0;
};

[[nodiscard]] bool inside_beam(const DeviceGeometry& geometry, const BeamPosition& p) noexcept;

/// Normalized bending strain shape g in [-1, 1]; +1 at the top surface of the hinge.
/// Throws DomainError outside the beam.
[[nodiscard]] double bending_profile(const DeviceGeometry& geometry, const BeamPosition& p);

/**
 * Lab-frame strain at `p` for bias `V`:
 *   e_xx = eps_ref (V / v_ref)^2 g(p), other components = ratio * e_xx.
 * Throws RangeError unless 0 <= V <= v_max, DomainError outside the beam.
 */
[[nodiscard]] StrainTensor strain_at(const DeviceModel& device, const BeamPosition& p, double V);

/// Parallel-plate field across the electrode gap, MV/cm.
[[nodiscard]] double gap_field_MV_per_cm(const DeviceGeometry& geometry, double V);

/// Small-deflection spring-end displacement (micrometres), without the pull-in check.
[[nodiscard]] double electrostatic_deflection_um(const DeviceGeometry& geometry, double V);

/// Deflection estimate (micrometres); throws RangeError once it exceeds gap/3.
[[nodiscard]] double pull_in_guard(const DeviceGeometry& geometry, double V);

/**
 * Steady-state thermal shift (GHz, <= 0) of the resonance for a periodic
 * pulse pattern. Each pulse deposits heat q = (pulse / max_pulse) (V / V_ref)^2,
 * and heat relaxes by r = exp(-(pulse + cooldown) / tau) per period, so the peak
 * heat converges to q / (1 - r). The shift is -coeff times the excess of that
 * peak over its value at the calibrated (max_pulse, cooldown_time) point.
 */
[[nodiscard]] double pulsed_resonance_offset(const ThermalModel& thermal, double pulse_us,
                                             double cooldown_us, double V);

/// Shortest cooldown (us) with zero thermal offset; +inf if no cooldown suffices.
[[nodiscard]] double minimum_safe_cooldown_us(const ThermalModel& thermal, double pulse_us,
                                              double V);

}  // namespace snvtune
