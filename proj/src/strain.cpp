// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/strain.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace snvtune {

std::string_view to_string(Frame frame) noexcept {
    switch (frame) {
        case Frame::lab: return "lab";
        case Frame::crystal: return "crystal";
        case Frame::defect: return "defect";
    }
    return "unknown";
}

StrainTensor::StrainTensor(double e_xx, double e_yy, double e_zz, double e_yz, double e_zx,
                           double e_xy, Frame frame, double limit)
    : c_{e_xx, e_yy, e_zz, e_yz, e_zx, e_xy}, frame_(frame) {
    static constexpr const char* kNames[] = {"xx", "yy", "zz", "yz", "zx", "xy"};
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (!std::isfinite(c_[i])) {
            throw DomainError(std::string("strain component e_") + kNames[i] + " is not finite");
        }
        if (std::abs(c_[i]) > limit) {
            std::ostringstream os;
            os << "strain component e_" << kNames[i] << " = " << c_[i]
               << " exceeds the small-strain limit " << limit;
            throw DomainError(os.str());
        }
    }
}

StrainTensor StrainTensor::from_matrix(const Eigen::Matrix3d& m, Frame frame, double limit) {
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ContractViolation("strain matrix is not symmetric");
    }
    // Average the off-diagonal pairs so round-off asymmetry does not leak into the result.
    return {m(0, 0),
            m(1, 1),
            m(2, 2),
            0.5 * (m(1, 2) + m(2, 1)),
            0.5 * (m(2, 0) + m(0, 2)),
            0.5 * (m(0, 1) + m(1, 0)),
            frame,
            limit};
}

Eigen::Matrix3d StrainTensor::matrix() const {
    Eigen::Matrix3d m;
    m << xx(), xy(), zx(),
         xy(), yy(), yz(),
         zx(), yz(), zz();
    return m;
}

void StrainSusceptibilities::validate() const {
    if (!std::isfinite(t_perp) || !std::isfinite(t_par) || !std::isfinite(d) || !std::isfinite(f)) {
        throw DomainError("strain susceptibilities must be finite");
    }
}

void SpinOrbit::validate() const {
    if (!(lambda_g >= 0.0) || !(lambda_u >= 0.0) || !std::isfinite(lambda_g) ||
        !std::isfinite(lambda_u)) {
        throw DomainError("spin-orbit splittings must be finite and non-negative");
    }
}

IrreducibleStrain irreducible_components(const StrainTensor& eps,
                                         const StrainSusceptibilities& susc) {
    if (eps.frame() != Frame::defect) {
        throw ContractViolation("irreducible_components requires a defect-frame tensor, got " +
                                std::string(to_string(eps.frame())));
    }
    susc.validate();
    return {
        susc.t_perp * (eps.xx() + eps.yy()) + susc.t_par * eps.zz(),
        susc.d * (eps.xx() - eps.yy()) + susc.f * eps.zx(),
        -2.0 * susc.d * eps.xy() + susc.f * eps.yz(),
    };
}

HermitianMatrix2 strain_matrix(const IrreducibleStrain& ir, double lambda_so) {
    using namespace std::complex_literals;
    HermitianMatrix2 h;
    h(0, 0) = ir.eps_A1g - ir.eps_Egx;
    h(1, 1) = ir.eps_A1g + ir.eps_Egx;
    h(0, 1) = ir.eps_Egy - 0.5i * lambda_so;
    h(1, 0) = ir.eps_Egy + 0.5i * lambda_so;
    return h;
}

double doublet_splitting(const IrreducibleStrain& ir, double lambda_so) noexcept {
    return std::hypot(lambda_so, 2.0 * ir.eps_Egx, 2.0 * ir.eps_Egy);
}

LevelResponse level_response(const IrreducibleStrain& ir_g, const IrreducibleStrain& ir_u,
                             const SpinOrbit& so, double nu0) {
    LevelResponse r;
    r.nu_zpl = nu0 + ir_u.eps_A1g - ir_g.eps_A1g;
    r.delta_g = doublet_splitting(ir_g, so.lambda_g);
    r.delta_u = doublet_splitting(ir_u, so.lambda_u);
    // Lowest excited branch sits delta_u/2 below the excited mean, lowest ground
    // branch delta_g/2 below the ground mean.
    r.nu_c = r.nu_zpl - 0.5 * r.delta_u + 0.5 * r.delta_g;
    return r;
}

}  // namespace snvtune
