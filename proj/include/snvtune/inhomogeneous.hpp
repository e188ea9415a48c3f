// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace snvtune {

/// Resonances collected from many PL spots.
struct InhomogeneousSample {
    std::vector<double> resonances_GHz;
    std::size_t spot_count = 0;
    double integration_time_s = 0.0;
};

struct CdfPoint {
    double value_GHz;
    double fraction;  ///< P(X <= value)
};

struct WindowStatistic {
    std::vector<CdfPoint> cdf;  ///< one point per distinct value, ascending, last fraction == 1
    double best_fraction = 0.0;
    double window_start_GHz = 0.0;  ///< left edge of a best window
};

/// Empirical CDF plus the largest fraction of resonances inside any closed
/// interval of width window_GHz. Throws InputError on an empty sample.
[[nodiscard]] WindowStatistic cdf_and_window(const InhomogeneousSample& sample, double window_GHz);

}  // namespace snvtune
