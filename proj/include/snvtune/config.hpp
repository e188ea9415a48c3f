// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration: one JSON document with unit-tagged quantities.
 *
 * Every dimensional value is written as {"value": 75, "unit": "V"} and is
 * converted to the internal unit of its field; a unit from the wrong family
 * (nm where a frequency is expected) is rejected. Unknown keys are rejected
 * too, so typos surface as errors instead of silently falling back to defaults.
 * All failures are ConfigError carrying the dotted key path.
 */

#pragma once

#include "snvtune/actuator.hpp"
#include "snvtune/emitter.hpp"
#include "snvtune/spectroscopy.hpp"
#include "snvtune/stabilization.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snvtune {

/// Converts `value` given in `unit` to `target_unit`. Throws ConfigError(key)
/// for unknown units or units of a different dimension.
[[nodiscard]] double convert_unit(double value, std::string_view unit, std::string_view target_unit,
                                  const std::string& key);

struct TuneCurvePlan {
    std::vector<std::string> emitter_ids;  ///< empty: every emitter in the roster
    double v_min_V = 0.0;
    double v_max_V = 90.0;
    int points = 91;
};

struct PlePlan {
    std::string emitter_id = "A1";
    std::vector<double> voltages_V{0.0, 30.0, 60.0, 90.0};
    std::optional<double> center_GHz;  ///< empty: centred on the predicted resonance
    double half_span_GHz = 2.0;
    int points = 201;
    double dwell_s = 0.05;
};

struct InhomoPlan {
    std::optional<std::filesystem::path> input_csv;  ///< resolved against the config directory
    int n = 1000;                                    ///< generated sample size without input
    double mean_GHz = 0.0;
    double sigma_GHz = 38.1;
    double window_GHz = 40.0;
};

struct StabilizePlan {
    std::string emitter_id = "A1";
    int seeds = 1;
};

struct PulsePlan {
    double voltage_V = 90.0;
    std::vector<double> pulses_us;
    std::vector<double> cooldowns_us;
};

struct RunConfig {
    PhysicsParams physics;
    DeviceModel device;
    std::vector<EmitterModel> emitters;
    StabilizationConfig control;
    TuneCurvePlan tune_curve;
    PlePlan ple;
    InhomoPlan inhomo;
    StabilizePlan stabilize;
    PulsePlan calibrate_pulse;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    SamplingMode sampling = SamplingMode::poisson;
    std::string hash;  ///< FNV-1a of the canonical JSON after overrides
    nlohmann::json document;  ///< the validated document the run was built from

    /// InputError listing the known ids if `id` is not in the roster.
    [[nodiscard]] const EmitterModel& emitter(std::string_view id) const;
};

/// Parses and validates a full document. `base_dir` resolves relative paths.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir);

/// Reads a JSON file; ConfigError("<file>") on syntax errors.
[[nodiscard]] nlohmann::json load_config_json(const std::filesystem::path& path);

/// Sets a (possibly nested) dotted key, creating objects on the way.
void set_override(nlohmann::json& doc, std::string_view dotted_key, nlohmann::json value);

/// {"value": v, "unit": u}
[[nodiscard]] nlohmann::json tagged(double value, std::string_view unit);

}  // namespace snvtune
