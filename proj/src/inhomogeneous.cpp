// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/inhomogeneous.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>

namespace snvtune {

WindowStatistic cdf_and_window(const InhomogeneousSample& sample, double window_GHz) {
    if (sample.resonances_GHz.empty()) throw InputError("inhomogeneous sample is empty");
    if (!(window_GHz >= 0.0)) throw InputError("window width must be >= 0");
    std::vector<double> v = sample.resonances_GHz;
    for (double x : v) {
        if (!std::isfinite(x)) throw InputError("inhomogeneous sample contains a non-finite value");
    }
    std::sort(v.begin(), v.end());
    const auto n = static_cast<double>(v.size());

    WindowStatistic out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
        out.cdf.push_back({v[i], static_cast<double>(i + 1) / n});
    }
    out.cdf.back().fraction = 1.0;

    // Some optimal window starts at a sample point.
    std::size_t best = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < v.size(); ++lo) {
        hi = std::max(hi, lo);
        while (hi < v.size() && v[hi] - v[lo] <= window_GHz) ++hi;
        if (hi - lo > best) {
            best = hi - lo;
            out.window_start_GHz = v[lo];
        }
    }
    out.best_fraction = static_cast<double>(best) / n;
    return out;
}

}  // namespace snvtune
