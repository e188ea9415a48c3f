// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/commands.hpp"
#include "snvtune/config.hpp"
#include "snvtune/errors.hpp"
#include "snvtune/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    int jobs = 1;
    bool expected_value = false;
};

struct Overrides {
    // tune-curve
    std::vector<std::string> emitters;
    std::optional<double> v_min, v_max;
    std::optional<int> points;
    // ple
    std::optional<std::string> emitter;
    std::vector<double> voltages;
    std::optional<double> center, half_span, dwell;
    // inhomo
    std::optional<int> n;
    std::optional<std::string> input;
    std::optional<double> window;
    // stabilize
    std::optional<double> duration;
    bool no_feedback = false;
    std::optional<int> seeds;
    // calibrate-pulse
    std::optional<double> voltage;
};

void apply(nlohmann::json& doc, const std::string& verb, const Globals& g, const Overrides& o) {
    using snvtune::set_override;
    using snvtune::tagged;
    if (g.seed) set_override(doc, "seed", *g.seed);
    if (g.expected_value) set_override(doc, "sampling", "expected_value");
    if (verb == "tune-curve") {
        if (!o.emitters.empty()) set_override(doc, "tune_curve.emitters", o.emitters);
        if (o.v_min) set_override(doc, "tune_curve.v_min", tagged(*o.v_min, "V"));
        if (o.v_max) set_override(doc, "tune_curve.v_max", tagged(*o.v_max, "V"));
        if (o.points) set_override(doc, "tune_curve.points", *o.points);
    } else if (verb == "ple") {
        if (o.emitter) set_override(doc, "ple.emitter", *o.emitter);
        if (!o.voltages.empty()) {
            set_override(doc, "ple.voltages", {{"values", o.voltages}, {"unit", "V"}});
        }
        if (o.center) set_override(doc, "ple.center", tagged(*o.center, "GHz"));
        if (o.half_span) set_override(doc, "ple.half_span", tagged(*o.half_span, "GHz"));
        if (o.points) set_override(doc, "ple.points", *o.points);
        if (o.dwell) set_override(doc, "ple.dwell", tagged(*o.dwell, "s"));
    } else if (verb == "inhomo") {
        if (o.n) {
            set_override(doc, "inhomo.n", *o.n);
            set_override(doc, "inhomo.input", "");
        }
        if (o.input) set_override(doc, "inhomo.input", *o.input);
        if (o.window) set_override(doc, "inhomo.window", tagged(*o.window, "GHz"));
    } else if (verb == "stabilize") {
        if (o.emitter) set_override(doc, "stabilize.emitter", *o.emitter);
        if (o.seeds) set_override(doc, "stabilize.seeds", *o.seeds);
        if (o.duration) set_override(doc, "control.duration", tagged(*o.duration, "s"));
        if (o.no_feedback) set_override(doc, "control.feedback", false);
    } else if (verb == "calibrate-pulse") {
        if (o.voltage) set_override(doc, "calibrate_pulse.voltage", tagged(*o.voltage, "V"));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strain tuning and frequency stabilization of SnV centers in diamond MEMS"};
    app.set_version_flag("--version", std::string(snvtune::kToolName) + " " + snvtune::kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    Overrides o;
    app.add_option("--config", g.config_path, "JSON configuration file")->required();
    app.add_option("--seed", g.seed, "master seed (overrides the config)");
    app.add_option("--out", g.out_dir, "output directory (overrides the config)");
    app.add_option("--jobs", g.jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
    app.add_flag("--expected-value", g.expected_value, "noise-free mode: expected counts instead of Poisson draws");

    auto* tune = app.add_subcommand("tune-curve", "C-transition shift and linewidth versus bias voltage");
    tune->add_option("--emitters", o.emitters, "emitter ids (default: whole roster)")->delimiter(',');
    tune->add_option("--v-min", o.v_min, "first voltage, V");
    tune->add_option("--v-max", o.v_max, "last voltage, V");
    tune->add_option("--points", o.points, "number of voltages");

    auto* ple = app.add_subcommand("ple", "simulated PLE scans at a series of bias voltages");
    ple->add_option("--emitter", o.emitter, "emitter id");
    ple->add_option("--voltage", o.voltages, "bias voltage, V (repeatable)");
    ple->add_option("--center", o.center, "scan centre, GHz from the unstrained line (default: predicted resonance)");
    ple->add_option("--half-span", o.half_span, "scan half width, GHz");
    ple->add_option("--points", o.points, "points per scan");
    ple->add_option("--dwell", o.dwell, "dwell per point, s");

    auto* inhomo = app.add_subcommand("inhomo", "CDF and best-window fraction of the inhomogeneous distribution");
    auto* n_opt = inhomo->add_option("--n", o.n, "generate this many resonances");
    inhomo->add_option("--input", o.input, "CSV with a resonance_GHz column")->excludes(n_opt);
    inhomo->add_option("--window", o.window, "window width, GHz");

    auto* stab = app.add_subcommand("stabilize", "closed-loop (or free-running) frequency stabilization");
    stab->add_option("--emitter", o.emitter, "emitter id");
    stab->add_option("--duration", o.duration, "run length, s");
    stab->add_flag("--no-feedback", o.no_feedback, "hold the bias fixed");
    stab->add_option("--seeds", o.seeds, "number of runs in the seed family");

    auto* pulse = app.add_subcommand("calibrate-pulse", "thermal offset versus pulse length and cooldown");
    pulse->add_option("--voltage", o.voltage, "pulse amplitude, V");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string verb = app.get_subcommands().front()->get_name();

    try {
        nlohmann::json doc = snvtune::load_config_json(g.config_path);
        apply(doc, verb, g, o);
        const auto base = std::filesystem::path(g.config_path).parent_path();
        const snvtune::RunConfig cfg = snvtune::parse_config(doc, base);

        snvtune::CommandResult result;
        if (verb == "tune-curve") {
            result = snvtune::cmd_tune_curve(cfg);
        } else if (verb == "ple") {
            result = snvtune::cmd_ple(cfg, g.jobs);
        } else if (verb == "inhomo") {
            result = snvtune::cmd_inhomo(cfg);
        } else if (verb == "stabilize") {
            result = snvtune::cmd_stabilize(cfg, g.jobs);
        } else {
            result = snvtune::cmd_calibrate_pulse(cfg);
        }
        const std::filesystem::path out = g.out_dir.value_or(cfg.output_dir);
        snvtune::write_outputs(result, out);
        std::cout << result.summary;
        std::cout << "wrote " << result.files.size() << " file(s) to " << out.string() << "\n";
        return 0;
    } catch (const snvtune::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const snvtune::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const snvtune::SetupError& e) {
        std::cerr << "setup error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const snvtune::RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const snvtune::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
