// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/emitter.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>

namespace snvtune {

void PhysicsParams::validate() const {
    if (!std::isfinite(nu0_GHz)) throw DomainError("nu0 must be finite");
    spin_orbit.validate();
    ground.validate();
    excited.validate();
}

void EmitterModel::validate() const {
    if (!(fwhm0_MHz > 0.0)) throw DomainError("emitter " + id + ": fwhm0 must be > 0");
    if (!(peak_rate_cps >= 0.0) || !(background_rate_cps >= 0.0)) {
        throw DomainError("emitter " + id + ": count rates must be >= 0");
    }
    if (!(broadening_slope_MHz_per_GHz >= 0.0)) {
        throw DomainError("emitter " + id + ": broadening slope must be >= 0");
    }
    physics.validate();
}

StrainTensor emitter_lab_strain(const EmitterModel& emitter, const DeviceModel& device, double V) {
    if (emitter.in_bulk()) {
        if (!(V >= 0.0) || V > device.calibration.v_max_V) {
            throw RangeError("bias voltage outside the device operating range");
        }
        return StrainTensor::zero(Frame::lab);
    }
    return strain_at(device, *emitter.position, V);
}

LevelResponse emitter_levels(const EmitterModel& emitter, const DeviceModel& device, double V) {
    const StrainTensor lab = emitter_lab_strain(emitter, device, V);
    const StrainTensor local = rotate_strain(lab, lab_to_defect(emitter.orientation), Frame::defect);
    const auto& ph = emitter.physics;
    return level_response(irreducible_components(local, ph.ground),
                          irreducible_components(local, ph.excited), ph.spin_orbit, ph.nu0_GHz);
}

double shift_from_voltage_chain(const EmitterModel& emitter, const DeviceModel& device, double V) {
    const double at_v = emitter_levels(emitter, device, V).nu_c;
    const double at_zero = emitter_levels(emitter, device, 0.0).nu_c;
    return at_v - at_zero;
}

double shift_slope(const EmitterModel& emitter, const DeviceModel& device, double V) {
    const double v_max = device.calibration.v_max_V;
    const double h = 1e-3 * std::max(1.0, v_max);
    const double lo = std::max(0.0, V - h);
    const double hi = std::min(v_max, V + h);
    return (shift_from_voltage_chain(emitter, device, hi) -
            shift_from_voltage_chain(emitter, device, lo)) /
           (hi - lo);
}

namespace {

double scaled_splitting(const IrreducibleStrain& unit, double s, double lambda) {
    return std::hypot(lambda, 2.0 * unit.eps_Egx * s, 2.0 * unit.eps_Egy * s);
}

// d/ds of scaled_splitting.
double scaled_splitting_derivative(const IrreducibleStrain& unit, double s, double lambda) {
    const double delta = scaled_splitting(unit, s, lambda);
    if (delta == 0.0) return 0.0;
    const double e2 = unit.eps_Egx * unit.eps_Egx + unit.eps_Egy * unit.eps_Egy;
    return 4.0 * e2 * s / delta;
}

}  // namespace

EmitterTuning::EmitterTuning(const EmitterModel& emitter, const DeviceModel& device)
    : so_(emitter.physics.spin_orbit),
      v_ref_(device.calibration.v_ref_V),
      v_max_(device.calibration.v_max_V) {
    const double v_unit = std::min(v_ref_, v_max_);
    const StrainTensor lab = emitter_lab_strain(emitter, device, v_unit);
    const StrainTensor local = rotate_strain(lab, lab_to_defect(emitter.orientation), Frame::defect);
    const double rescale = (v_ref_ / v_unit) * (v_ref_ / v_unit);
    auto unit = [&](const StrainSusceptibilities& susc) {
        IrreducibleStrain ir = irreducible_components(local, susc);
        ir.eps_A1g *= rescale;
        ir.eps_Egx *= rescale;
        ir.eps_Egy *= rescale;
        return ir;
    };
    unit_g_ = unit(emitter.physics.ground);
    unit_u_ = unit(emitter.physics.excited);
}

double EmitterTuning::shift(double V) const {
    if (!(V >= 0.0) || V > v_max_) throw RangeError("bias voltage outside the device operating range");
    const double s = (V / v_ref_) * (V / v_ref_);
    const double zpl = (unit_u_.eps_A1g - unit_g_.eps_A1g) * s;
    const double du = scaled_splitting(unit_u_, s, so_.lambda_u) - so_.lambda_u;
    const double dg = scaled_splitting(unit_g_, s, so_.lambda_g) - so_.lambda_g;
    return zpl - 0.5 * du + 0.5 * dg;
}

double EmitterTuning::slope(double V) const {
    const double s = (V / v_ref_) * (V / v_ref_);
    const double ds_dv = 2.0 * V / (v_ref_ * v_ref_);
    const double d_shift_ds = (unit_u_.eps_A1g - unit_g_.eps_A1g) -
                              0.5 * scaled_splitting_derivative(unit_u_, s, so_.lambda_u) +
                              0.5 * scaled_splitting_derivative(unit_g_, s, so_.lambda_g);
    return d_shift_ds * ds_dv;
}

}  // namespace snvtune
