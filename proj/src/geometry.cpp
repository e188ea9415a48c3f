// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/geometry.hpp"

#include "snvtune/errors.hpp"

#include <Eigen/Geometry>

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace snvtune {

std::string_view to_string(Orientation o) noexcept {
    switch (o) {
        case Orientation::p111: return "[111]";
        case Orientation::m1p1p1: return "[-111]";
        case Orientation::p1m1p1: return "[1-11]";
        case Orientation::m1m1p1: return "[-1-11]";
    }
    return "?";
}

std::string_view to_string(OrientationClass c) noexcept {
    return c == OrientationClass::axial ? "axial" : "transversal";
}

Orientation parse_orientation(std::string_view text) {
    std::string compact;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    }
    for (Orientation o : kAllOrientations) {
        if (compact == to_string(o)) return o;
    }
    throw InputError("unknown orientation '" + std::string(text) +
                     "' (expected one of [111], [-111], [1-11], [-1-11])");
}

Eigen::Vector3d axis(Orientation o) {
    switch (o) {
        case Orientation::p111: return {1, 1, 1};
        case Orientation::m1p1p1: return {-1, 1, 1};
        case Orientation::p1m1p1: return {1, -1, 1};
        case Orientation::m1m1p1: return {-1, -1, 1};
    }
    return {1, 1, 1};
}

bool RotationMatrix::is_proper_rotation(const Eigen::Matrix3d& m, double tol) {
    if (!m.allFinite()) return false;
    const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m) : m_(m) {
    if (!is_proper_rotation(m)) {
        throw ContractViolation("matrix is not a proper rotation (R^T R != I or det != +1)");
    }
}

RotationMatrix lab_to_crystal() {
    const double c = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d m;
    // Columns are the lab axes expressed in crystal coordinates.
    m << c, -c, 0.0,
         c,  c, 0.0,
         0.0, 0.0, 1.0;
    return RotationMatrix(m);
}

RotationMatrix defect_rotation(Orientation o) {
    const Eigen::Vector3d a = axis(o);
    const Eigen::Vector3d z = a / std::sqrt(3.0);
    const Eigen::Vector3d x = Eigen::Vector3d(a.x(), a.y(), -2.0 * a.z()) / std::sqrt(6.0);
    const Eigen::Vector3d y = z.cross(x);
    Eigen::Matrix3d m;
    m.row(0) = x.transpose();
    m.row(1) = y.transpose();
    m.row(2) = z.transpose();
    return RotationMatrix(m);
}

RotationMatrix lab_to_defect(Orientation o) { return defect_rotation(o) * lab_to_crystal(); }

RotationMatrix rotation_about_z(double angle) {
    return RotationMatrix(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix());
}

StrainTensor rotate_strain(const StrainTensor& eps, const RotationMatrix& R, Frame target) {
    const Eigen::Matrix3d& r = R.matrix();
    const Eigen::Matrix3d out = r * eps.matrix() * r.transpose();
    // The input already passed the small-strain guard; a rotation cannot make it less physical.
    return StrainTensor::from_matrix(out, target, std::numeric_limits<double>::max());
}

StrainTensor rotate_strain(const StrainTensor& eps, const Eigen::Matrix3d& R, Frame target) {
    return rotate_strain(eps, RotationMatrix(R), target);
}

OrientationClass classify_axis(const Eigen::Vector3d& crystal_axis) {
    const Eigen::Vector3d beam = lab_to_crystal() * Eigen::Vector3d::UnitX();
    const double along = std::abs(crystal_axis.normalized().dot(beam));
    return along > 1e-9 ? OrientationClass::axial : OrientationClass::transversal;
}

OrientationClass classify(Orientation o) { return classify_axis(axis(o)); }

}  // namespace snvtune
