// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/actuator.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace snvtune {
namespace {

constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite and > 0");
    }
}

}  // namespace

void DeviceGeometry::validate() const {
    require_positive(w_spring_um, "w_spring");
    require_positive(w_waveguide_um, "w_waveguide");
    require_positive(w_support_um, "w_support");
    require_positive(w_tp_um, "w_tp");
    require_positive(d_support_um, "d_support");
    require_positive(l_waveguide_um, "l_waveguide");
    require_positive(l_tp_um, "l_tp");
    require_positive(gap_height_um, "gap_height");
    require_positive(h_waveguide_um, "h_waveguide");
    require_positive(youngs_modulus_GPa, "youngs_modulus");
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) {
        throw DomainError("poisson_ratio must lie in (-1, 0.5)");
    }
}

void ActuatorCalibration::validate() const {
    require_positive(v_ref_V, "v_ref");
    require_positive(eps_ref, "eps_ref");
    require_positive(v_max_V, "v_max");
    for (double r : tensor_ratios) {
        if (!std::isfinite(r) || std::abs(r) > 1.0) {
            throw DomainError("tensor_ratios entries must be finite with |ratio| <= 1");
        }
    }
}

void ThermalModel::validate() const {
    require_positive(cooldown_time_us, "cooldown_time");
    require_positive(max_pulse_us, "max_pulse");
    require_positive(relaxation_time_us, "relaxation_time");
    require_positive(reference_voltage_V, "reference_voltage");
    if (!(heat_shift_coeff_GHz >= 0.0) || !std::isfinite(heat_shift_coeff_GHz)) {
        throw DomainError("heat_shift_coeff must be finite and >= 0");
    }
}

void DeviceModel::validate() const {
    geometry.validate();
    calibration.validate();
    thermal.validate();
    // Throws if the configured operating limit would pull the actuator in.
    (void)pull_in_guard(geometry, calibration.v_max_V);
}

bool inside_beam(const DeviceGeometry& g, const BeamPosition& p) noexcept {
    constexpr double slack = 1e-12;
    return p.x_um >= -slack && p.x_um <= g.l_waveguide_um + slack &&
           std::abs(p.y_um) <= 0.5 * g.w_waveguide_um + slack &&
           std::abs(p.z_um) <= 0.5 * g.h_waveguide_um + slack;
}

double bending_profile(const DeviceGeometry& g, const BeamPosition& p) {
    if (!inside_beam(g, p)) {
        std::ostringstream os;
        os << "position (" << p.x_um << ", " << p.y_um << ", " << p.z_um
           << ") um is outside the beam";
        throw DomainError(os.str());
    }
    const double xi = p.x_um / g.l_waveguide_um;
    const double curvature = 1.0 - 2.0 * xi;           // w''(xi) / w''(0)
    const double height = p.z_um / (0.5 * g.h_waveguide_um);
    return curvature * height;
}

StrainTensor strain_at(const DeviceModel& device, const BeamPosition& p, double V) {
    const auto& cal = device.calibration;
    if (!(V >= 0.0) || V > cal.v_max_V) {
        std::ostringstream os;
        os << "bias " << V << " V outside [0, " << cal.v_max_V << "] V";
        throw RangeError(os.str());
    }
    const double g = bending_profile(device.geometry, p);
    const double s = V / cal.v_ref_V;
    const double e_xx = cal.eps_ref * s * s * g;
    const auto& r = cal.tensor_ratios;
    return {e_xx, r[0] * e_xx, r[1] * e_xx, r[2] * e_xx, r[3] * e_xx, r[4] * e_xx, Frame::lab};
}

double gap_field_MV_per_cm(const DeviceGeometry& g, double V) {
    return V / (g.gap_height_um * 1e-4) * 1e-6;
}

double electrostatic_deflection_um(const DeviceGeometry& g, double V) {
    if (!(V >= 0.0)) throw RangeError("bias voltage must be >= 0");
    // Spring: guided cantilever of width w_spring, thickness h, length l_tp.
    const double E = g.youngs_modulus_GPa * 1e9;
    const double w = g.w_spring_um * 1e-6;
    const double h = g.h_waveguide_um * 1e-6;
    const double L = g.l_tp_um * 1e-6;
    const double stiffness = E * w * h * h * h / (L * L * L);  // N/m
    // Electrode overlap: spring length times support depth.
    const double area = g.l_tp_um * 1e-6 * g.d_support_um * 1e-6;
    const double gap = g.gap_height_um * 1e-6;
    const double force = kVacuumPermittivity * area * V * V / (2.0 * gap * gap);
    return force / stiffness * 1e6;
}

double pull_in_guard(const DeviceGeometry& g, double V) {
    const double deflection = electrostatic_deflection_um(g, V);
    if (deflection > g.gap_height_um / 3.0) {
        std::ostringstream os;
        os << "pull-in risk at " << V << " V: deflection " << deflection
           << " um exceeds gap/3 = " << g.gap_height_um / 3.0 << " um";
        throw RangeError(os.str());
    }
    return deflection;
}

namespace {

double heat_per_pulse(const ThermalModel& t, double pulse_us, double V) {
    const double v = V / t.reference_voltage_V;
    return pulse_us / t.max_pulse_us * v * v;
}

double safe_peak_heat(const ThermalModel& t) {
    return 1.0 / -std::expm1(-(t.max_pulse_us + t.cooldown_time_us) / t.relaxation_time_us);
}

}  // namespace

double pulsed_resonance_offset(const ThermalModel& t, double pulse_us, double cooldown_us,
                               double V) {
    if (!(pulse_us > 0.0) || !(cooldown_us >= 0.0)) {
        throw InputError("pulse duration must be > 0 and cooldown >= 0");
    }
    const double q = heat_per_pulse(t, pulse_us, V);
    if (q == 0.0) return 0.0;
    // Fixed point of H <- (H + q) r, plus the heat of the current pulse.
    const double one_minus_r = -std::expm1(-(pulse_us + cooldown_us) / t.relaxation_time_us);
    const double peak = q / one_minus_r;
    const double excess = peak - safe_peak_heat(t);
    return excess > 0.0 ? -t.heat_shift_coeff_GHz * excess : 0.0;
}

double minimum_safe_cooldown_us(const ThermalModel& t, double pulse_us, double V) {
    const double q = heat_per_pulse(t, pulse_us, V);
    const double ratio = q / safe_peak_heat(t);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    const double period = -t.relaxation_time_us * std::log1p(-ratio);
    return std::max(0.0, period - pulse_us);
}

}  // namespace snvtune
