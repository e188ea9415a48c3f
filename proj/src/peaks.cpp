// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/peaks.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snvtune {

double peak_prominence(std::span<const double> y, std::size_t index) {
    const double h = y[index];
    double left_min = h;
    for (std::size_t i = index; i-- > 0;) {
        if (y[i] > h) break;
        left_min = std::min(left_min, y[i]);
    }
    double right_min = h;
    for (std::size_t i = index + 1; i < y.size(); ++i) {
        if (y[i] > h) break;
        right_min = std::min(right_min, y[i]);
    }
    return h - std::max(left_min, right_min);
}

std::vector<double> find_peaks(std::span<const double> f, std::span<const double> y,
                               double min_prominence, double min_separation_GHz) {
    if (f.size() != y.size()) throw InputError("find_peaks: frequency and intensity lengths differ");
    if (f.empty()) throw InputError("find_peaks: empty spectrum");

    std::vector<std::size_t> candidates;
    const std::size_t n = y.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (y[i] > y[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && y[j + 1] == y[i]) ++j;
            if (j + 1 < n && y[j + 1] < y[i]) {
                candidates.push_back((i + j) / 2);
            }
            i = j + 1;
        } else {
            ++i;
        }
    }

    std::vector<std::size_t> prominent;
    for (std::size_t c : candidates) {
        if (peak_prominence(y, c) >= min_prominence) prominent.push_back(c);
    }

    // Greedy by height: drop any peak within the separation of a higher kept one.
    std::vector<std::size_t> order(prominent.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return y[prominent[a]] > y[prominent[b]];
    });
    std::vector<std::size_t> kept;
    for (std::size_t k : order) {
        const std::size_t idx = prominent[k];
        const bool clash = std::any_of(kept.begin(), kept.end(), [&](std::size_t other) {
            return std::abs(f[other] - f[idx]) < min_separation_GHz;
        });
        if (!clash) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<double> out;
    out.reserve(kept.size());
    for (std::size_t idx : kept) out.push_back(f[idx]);
    return out;
}

}  // namespace snvtune
