// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace snvtune {

/**
 * Local maxima of `intensity` sampled at ascending `frequency_GHz`.
 *
 * A peak survives if its topographic prominence is >= min_prominence. Among
 * survivors closer than min_separation_GHz only the higher one is kept.
 * Flat-topped maxima report the middle sample. Returns frequencies ascending.
 */
[[nodiscard]] std::vector<double> find_peaks(std::span<const double> frequency_GHz,
                                             std::span<const double> intensity,
                                             double min_prominence, double min_separation_GHz);

/// Prominence of the sample at `index` (which need not be a maximum).
[[nodiscard]] double peak_prominence(std::span<const double> intensity, std::size_t index);

}  // namespace snvtune
