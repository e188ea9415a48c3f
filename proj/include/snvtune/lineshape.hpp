// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>

namespace snvtune {

/// Unit-peak Lorentzian; `x` and `fwhm` in the same unit.
[[nodiscard]] inline double lorentzian(double x, double fwhm) noexcept {
    const double u = 2.0 * x / fwhm;
    return 1.0 / (1.0 + u * u);
}

/// Unit-peak Gaussian.
[[nodiscard]] inline double gaussian(double x, double fwhm) noexcept {
    const double u = x / fwhm;
    return std::exp(-4.0 * std::numbers::ln2 * u * u);
}

/**
 * Pseudo-Voigt approximation of a Voigt profile with Gaussian width fwhm_g and
 * Lorentzian width fwhm_l: cL * L + cG * G with a common width, the
 * Olivero-Longbothum Voigt FWHM. The weights are cubic polynomials in
 * (fwhm_l - fwhm_g) / (fwhm_l + fwhm_g) from an empirical fit; the profile stays
 * within 0.7% of the exact Voigt peak everywhere.
 */
class PseudoVoigt {
public:
    PseudoVoigt(double fwhm_g, double fwhm_l) noexcept;

    [[nodiscard]] double fwhm() const noexcept { return fwhm_; }
    /// Weight of the Lorentzian component.
    [[nodiscard]] double eta() const noexcept { return eta_; }

    /// Area-normalized profile.
    [[nodiscard]] double density(double x) const noexcept;

    /// Profile scaled to 1 at x = 0.
    [[nodiscard]] double unit_peak(double x) const noexcept { return density(x) / peak_; }

private:
    double fwhm_;
    double eta_;
    double gauss_weight_;
    double peak_;
};

}  // namespace snvtune
