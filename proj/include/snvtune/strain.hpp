// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file strain.hpp
 * @brief Strain tensor and the D3d strain response of a group-IV split-vacancy center.
 *
 * The orbital doublets of the ground (g) and excited (u) manifolds respond to
 * strain through three symmetry-adapted combinations of the defect-frame strain
 * tensor: eps_A1g shifts both orbitals, eps_Egx / eps_Egy mix and split them.
 * Spin-orbit coupling sets the zero-strain splitting of each doublet.
 *
 * All frequencies are in GHz, susceptibilities in GHz per unit strain.
 */

#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <string_view>

namespace snvtune {

enum class Frame { lab, crystal, defect };

[[nodiscard]] std::string_view to_string(Frame frame) noexcept;

/// Default bound on |eps_ij| for the infinitesimal-strain model.
inline constexpr double kDefaultStrainLimit = 1e-2;

/**
 * Symmetric rank-2 strain tensor; only the six independent entries are stored.
 *
 * Construction rejects non-finite components and components whose magnitude
 * exceeds the small-strain guard.
 */
class StrainTensor {
public:
    StrainTensor() = default;
    StrainTensor(double e_xx, double e_yy, double e_zz, double e_yz, double e_zx, double e_xy,
                 Frame frame, double limit = kDefaultStrainLimit);

    [[nodiscard]] static StrainTensor zero(Frame frame) { return {0, 0, 0, 0, 0, 0, frame}; }

    /// Builds from a 3x3 matrix; the matrix must be symmetric to 1e-12 relative.
    [[nodiscard]] static StrainTensor from_matrix(const Eigen::Matrix3d& m, Frame frame,
                                                  double limit = kDefaultStrainLimit);

    [[nodiscard]] Eigen::Matrix3d matrix() const;

    [[nodiscard]] double xx() const noexcept { return c_[0]; }
    [[nodiscard]] double yy() const noexcept { return c_[1]; }
    [[nodiscard]] double zz() const noexcept { return c_[2]; }
    [[nodiscard]] double yz() const noexcept { return c_[3]; }
    [[nodiscard]] double zx() const noexcept { return c_[4]; }
    [[nodiscard]] double xy() const noexcept { return c_[5]; }
    [[nodiscard]] Frame frame() const noexcept { return frame_; }
    [[nodiscard]] double trace() const noexcept { return c_[0] + c_[1] + c_[2]; }

    /// Components in (xx, yy, zz, yz, zx, xy) order.
    [[nodiscard]] const std::array<double, 6>& components() const noexcept { return c_; }

    friend bool operator==(const StrainTensor&, const StrainTensor&) = default;

private:
    std::array<double, 6> c_{};
    Frame frame_ = Frame::lab;
};

/// Strain susceptibilities of one electronic manifold, GHz per unit strain.
struct StrainSusceptibilities {
    double t_perp = 0.0;
    double t_par = 0.0;
    double d = 0.0;
    double f = 0.0;

    void validate() const;
};

/// Spin-orbit splittings of the ground and excited doublets (GHz).
struct SpinOrbit {
    double lambda_g = 0.0;
    double lambda_u = 0.0;

    void validate() const;
};

/// Irreducible strain of one manifold, already scaled by its susceptibilities (GHz).
struct IrreducibleStrain {
    double eps_A1g = 0.0;
    double eps_Egx = 0.0;
    double eps_Egy = 0.0;
};

/// Mean ZPL, manifold splittings and C-transition frequency (GHz).
struct LevelResponse {
    double nu_zpl = 0.0;
    double delta_g = 0.0;
    double delta_u = 0.0;
    double nu_c = 0.0;
};

using HermitianMatrix2 = Eigen::Matrix2cd;

/// Projects a defect-frame strain tensor onto the A1g and Eg deformation modes.
/// Throws ContractViolation unless `eps` is tagged Frame::defect.
[[nodiscard]] IrreducibleStrain irreducible_components(const StrainTensor& eps,
                                                      const StrainSusceptibilities& susc);

/**
 * Orbital Hamiltonian of one manifold in the {e_x, e_y} basis, spin-orbit included.
 *
 *   [[A1g - Egx,      Egy - i*lambda/2],
 *    [Egy + i*lambda/2, A1g + Egx     ]]
 *
 * Its eigen-gap is sqrt(lambda^2 + 4 Egx^2 + 4 Egy^2), which makes it a
 * diagonalization cross-check for level_response().
 */
[[nodiscard]] HermitianMatrix2 strain_matrix(const IrreducibleStrain& ir, double lambda_so);

/// Closed-form level response. nu0 is the unstrained mean ZPL frequency.
[[nodiscard]] LevelResponse level_response(const IrreducibleStrain& ir_g,
                                           const IrreducibleStrain& ir_u, const SpinOrbit& so,
                                           double nu0);

/// Splitting of a single doublet: sqrt(lambda^2 + 4 Egx^2 + 4 Egy^2).
[[nodiscard]] double doublet_splitting(const IrreducibleStrain& ir, double lambda_so) noexcept;

}  // namespace snvtune
