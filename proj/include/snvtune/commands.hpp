// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file commands.hpp
 * @brief The five pipelines behind the command-line verbs.
 *
 * Each command builds all of its output files in memory and returns them;
 * nothing touches the disk until the whole computation has succeeded, so a
 * failing run leaves no partial output. Independent tasks (voltages of a PLE
 * series, seeds of a stabilization family) can run on `jobs` threads; each
 * task owns its RNG stream derived from the master seed, so results do not
 * depend on the thread count.
 */

#pragma once

#include "snvtune/config.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace snvtune {

struct OutputFile {
    std::string name;
    std::string content;
};

struct CommandResult {
    std::vector<OutputFile> files;
    std::string summary;  ///< short human-readable report

    [[nodiscard]] const OutputFile& file(std::string_view name) const;
};

/// Shift and linewidth versus voltage for the selected emitters plus a bulk reference.
[[nodiscard]] CommandResult cmd_tune_curve(const RunConfig& cfg);
/// One PLE scan per configured voltage, with metadata sidecars and a fit summary.
[[nodiscard]] CommandResult cmd_ple(const RunConfig& cfg, int jobs = 1);
/// Empirical CDF and best-window fraction of an inhomogeneous sample.
[[nodiscard]] CommandResult cmd_inhomo(const RunConfig& cfg);
/// Stabilization runs for `stabilize.seeds` seeds of the master seed family.
[[nodiscard]] CommandResult cmd_stabilize(const RunConfig& cfg, int jobs = 1);
/// Thermal offset table over the pulse/cooldown grid and the safe-cooldown boundary.
[[nodiscard]] CommandResult cmd_calibrate_pulse(const RunConfig& cfg);

void write_outputs(const CommandResult& result, const std::filesystem::path& dir);

/// Runs fn(0..n-1) on up to `jobs` threads; rethrows the lowest-index failure.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace snvtune
