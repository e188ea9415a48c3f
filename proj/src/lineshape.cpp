// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace snvtune {

PseudoVoigt::PseudoVoigt(double fwhm_g, double fwhm_l) noexcept {
    const double g = std::max(fwhm_g, 0.0);
    const double l = std::max(fwhm_l, 0.0);
    fwhm_ = 0.5346 * l + std::sqrt(0.2166 * l * l + g * g);
    if (g == 0.0 || l == 0.0) {
        // Pure limits are exact.
        eta_ = g == 0.0 ? 1.0 : 0.0;
        gauss_weight_ = 1.0 - eta_;
    } else {
        const double d = (l - g) / (l + g);
        eta_ = 0.68188 + 0.61293 * d - 0.18384 * d * d - 0.11568 * d * d * d;
        gauss_weight_ = 0.32460 - 0.61825 * d + 0.17681 * d * d + 0.12109 * d * d * d;
    }
    peak_ = fwhm_ > 0.0 ? density(0.0) : 1.0;
}

double PseudoVoigt::density(double x) const noexcept {
    const double hw = 0.5 * fwhm_;
    const double lor = hw / (std::numbers::pi * (x * x + hw * hw));
    const double sigma = fwhm_ / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double gau = std::exp(-0.5 * x * x / (sigma * sigma)) /
                       (sigma * std::sqrt(2.0 * std::numbers::pi));
    return eta_ * lor + gauss_weight_ * gau;
}

}  // namespace snvtune
