// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fit.hpp
 * @brief Single-line fits of photon-count spectra.
 *
 * Model: amplitude * profile(x - center) + background, profile unit-peak
 * Lorentzian or pseudo-Voigt. Parameters are estimated by Levenberg-Marquardt
 * on Poisson-weighted residuals with the weights re-evaluated from the model
 * (iteratively reweighted least squares); at convergence this solves the
 * Poisson maximum-likelihood score equations, and the reported standard errors
 * come from the inverse Fisher matrix.
 */

#pragma once

#include "snvtune/spectroscopy.hpp"

#include <span>
#include <string_view>

namespace snvtune {

enum class LineShape { lorentzian, voigt };

[[nodiscard]] LineShape parse_line_shape(std::string_view text);

struct FitResult {
    double center_GHz = 0.0;
    double fwhm_MHz = 0.0;  ///< total FWHM (pseudo-Voigt width for voigt fits)
    double amplitude = 0.0;  ///< counts at line center above background
    double background = 0.0;
    double center_stderr_GHz = 0.0;
    double fwhm_stderr_MHz = 0.0;
    double lorentzian_fwhm_MHz = 0.0;
    double gaussian_fwhm_MHz = 0.0;  ///< zero for Lorentzian fits
    double reduced_chi2 = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Needs >= 8 points (InputError otherwise). Returns converged = false on data
/// without a resolvable peak instead of throwing.
[[nodiscard]] FitResult fit_line(std::span<const double> x_GHz, std::span<const double> counts,
                                 LineShape shape);

[[nodiscard]] FitResult fit_line(const ScanRecord& scan, LineShape shape);

/// Model value for a fit result at detuning x (GHz).
[[nodiscard]] double evaluate_line(const FitResult& fit, LineShape shape, double x_GHz);

}  // namespace snvtune
