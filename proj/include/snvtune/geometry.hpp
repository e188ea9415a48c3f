// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry.hpp
 * @brief Frame conventions for a [110] waveguide on a (001) diamond surface.
 *
 * Lab frame: x along the waveguide long axis ([110]), z along the surface
 * normal ([001]), y = z cross x ([-110]).
 * Defect frame: z along the center's <111> symmetry axis.
 *
 * A RotationMatrix R maps coordinates from a source frame into a target frame,
 * v_target = R v_source, so a rank-2 tensor transforms as R eps R^T.
 */

#pragma once

#include "snvtune/strain.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <string_view>

namespace snvtune {

enum class Orientation { p111, m1p1p1, p1m1p1, m1m1p1 };

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::p111, Orientation::m1p1p1, Orientation::p1m1p1, Orientation::m1m1p1};

enum class OrientationClass { axial, transversal };

/// Miller-index label, e.g. "[111]" or "[-1-11]".
[[nodiscard]] std::string_view to_string(Orientation o) noexcept;
[[nodiscard]] std::string_view to_string(OrientationClass c) noexcept;

/// Parses "[111]", "[-111]", "[1-11]", "[-1-11]" (also "[-1 1 1]" style with spaces).
/// Throws InputError on anything else.
[[nodiscard]] Orientation parse_orientation(std::string_view text);

/// Integer <111> axis of a variant in crystal coordinates, e.g. (-1, 1, 1).
[[nodiscard]] Eigen::Vector3d axis(Orientation o);

/// Proper rotation (orthonormal, det = +1). Construction validates to 1e-12.
class RotationMatrix {
public:
    RotationMatrix() = default;
    explicit RotationMatrix(const Eigen::Matrix3d& m);

    [[nodiscard]] static RotationMatrix identity() { return RotationMatrix{}; }

    [[nodiscard]] const Eigen::Matrix3d& matrix() const noexcept { return m_; }
    [[nodiscard]] RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
    [[nodiscard]] Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
    [[nodiscard]] RotationMatrix operator*(const RotationMatrix& other) const {
        return RotationMatrix(m_ * other.m_);
    }

    static constexpr double kTolerance = 1e-12;

    /// True if m is orthonormal with det +1 to `tol`.
    [[nodiscard]] static bool is_proper_rotation(const Eigen::Matrix3d& m, double tol = kTolerance);

private:
    Eigen::Matrix3d m_ = Eigen::Matrix3d::Identity();
};

/// Lab -> cubic crystal axes: a 45 degree rotation about [001].
[[nodiscard]] RotationMatrix lab_to_crystal();

/**
 * Crystal -> defect frame for one variant.
 *
 * Rows of the matrix are the defect axes in crystal coordinates: z along the
 * variant's <111> axis (a, b, c)/sqrt(3), x along (a, b, -2c)/sqrt(6), y = z x x.
 */
[[nodiscard]] RotationMatrix defect_rotation(Orientation o);

/// Lab -> defect frame for one variant (defect_rotation * lab_to_crystal).
[[nodiscard]] RotationMatrix lab_to_defect(Orientation o);

/// Rotation about the z axis by `angle` radians; used to re-pick the in-plane defect axes.
[[nodiscard]] RotationMatrix rotation_about_z(double angle);

/// eps' = R eps R^T, tagged with `target`. The input frame is not checked: the
/// caller owns the pairing between R and the frames it connects.
[[nodiscard]] StrainTensor rotate_strain(const StrainTensor& eps, const RotationMatrix& R,
                                         Frame target);

/// Overload for an unvalidated matrix; throws ContractViolation if it is not a proper rotation.
[[nodiscard]] StrainTensor rotate_strain(const StrainTensor& eps, const Eigen::Matrix3d& R,
                                         Frame target);

/**
 * Axial variants have a <111> axis with a component along the [110] waveguide
 * axis and respond strongly to uniaxial [110] strain; the other two lie in the
 * (110) plane perpendicular to the beam and are transversal.
 */
[[nodiscard]] OrientationClass classify(Orientation o);

/// Classification from an arbitrary axis vector; invariant under v -> -v.
[[nodiscard]] OrientationClass classify_axis(const Eigen::Vector3d& crystal_axis);

}  // namespace snvtune
