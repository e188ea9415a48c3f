// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/commands.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/fit.hpp"
#include "snvtune/geometry.hpp"
#include "snvtune/inhomogeneous.hpp"
#include "snvtune/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace snvtune {

using ojson = nlohmann::ordered_json;

const OutputFile& CommandResult::file(std::string_view name) const {
    for (const auto& f : files) {
        if (f.name == name) return f;
    }
    throw InputError("no output file named " + std::string(name));
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = n;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void write_outputs(const CommandResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : result.files) write_text(dir / f.name, f.content);
}

namespace {

Provenance provenance(const RunConfig& cfg) { return {cfg.hash, cfg.seed}; }

std::string json_text(const ojson& j) { return j.dump(2) + "\n"; }

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string class_name(const EmitterModel& e) {
    return e.in_bulk() ? "bulk" : std::string(to_string(classify(e.orientation)));
}

ojson emitter_json(const EmitterModel& e) {
    ojson j;
    j["id"] = e.id;
    j["orientation"] = std::string(to_string(e.orientation));
    j["class"] = class_name(e);
    if (e.position) {
        j["position_um"] = {e.position->x_um, e.position->y_um, e.position->z_um};
    } else {
        j["position_um"] = nullptr;
    }
    return j;
}

}  // namespace

CommandResult cmd_tune_curve(const RunConfig& cfg) {
    const auto& plan = cfg.tune_curve;
    std::vector<EmitterModel> selected;
    if (plan.emitter_ids.empty()) {
        selected = cfg.emitters;
    } else {
        for (const auto& id : plan.emitter_ids) selected.push_back(cfg.emitter(id));
    }
    const bool has_bulk = std::any_of(selected.begin(), selected.end(),
                                      [](const EmitterModel& e) { return e.in_bulk(); });
    if (!has_bulk) {
        EmitterModel ref;
        ref.id = "bulk_reference";
        ref.physics = cfg.physics;
        ref.nu0_GHz = cfg.physics.nu0_GHz;
        selected.push_back(ref);
    }

    CsvWriter w(provenance(cfg), {"emitter_id", "orientation", "class", "V", "shift_GHz", "fwhm_MHz"});
    std::string summary;
    for (const auto& e : selected) {
        double last_shift = 0.0;
        for (int i = 0; i < plan.points; ++i) {
            const double V = plan.points == 1
                                 ? plan.v_min_V
                                 : plan.v_min_V + (plan.v_max_V - plan.v_min_V) * i / (plan.points - 1);
            const double shift = shift_from_voltage_chain(e, cfg.device, V);
            w.cell(e.id).cell(to_string(e.orientation)).cell(class_name(e)).cell(V).cell(shift)
                .cell(effective_linewidth(e, shift));
            w.end_row();
            last_shift = shift;
        }
        summary += e.id + " (" + class_name(e) + "): shift at " + fmt("%.1f", plan.v_max_V) +
                   " V = " + fmt("%.3f", last_shift) + " GHz\n";
    }
    return {{{"tune_curve.csv", w.str()}}, summary};
}

CommandResult cmd_ple(const RunConfig& cfg, int jobs) {
    const auto& plan = cfg.ple;
    const EmitterModel& e = cfg.emitter(plan.emitter_id);
    const Provenance prov = provenance(cfg);
    const std::size_t n = plan.voltages_V.size();
    for (double V : plan.voltages_V) {
        if (!(V >= 0.0) || V > cfg.device.calibration.v_max_V) {
            throw RangeError("PLE bias " + format_double(V) + " V outside [0, v_max]");
        }
    }

    struct Item {
        ScanRecord scan;
        double shift = 0.0;
        double center = 0.0;
        bool inside = true;
        FitResult fit;
    };
    std::vector<Item> items(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        Item& it = items[i];
        const double V = plan.voltages_V[i];
        it.shift = shift_from_voltage_chain(e, cfg.device, V);
        it.center = plan.center_GHz.value_or(it.shift);
        const auto grid = detuning_grid(it.center, plan.half_span_GHz, std::size_t(plan.points));
        it.inside = it.shift >= grid.front() && it.shift <= grid.back();
        it.scan = simulate_ple(e, cfg.device, V, grid, plan.dwell_s, derive_seed(cfg.seed, i), cfg.sampling);
        it.fit = fit_line(it.scan, LineShape::lorentzian);
    });

    CommandResult out;
    CsvWriter table(prov, {"scan", "V", "shift_GHz", "model_fwhm_MHz", "fit_center_GHz",
                           "fit_center_stderr_GHz", "fit_fwhm_MHz", "fit_fwhm_stderr_MHz", "converged",
                           "resonance_in_window"});
    for (std::size_t i = 0; i < n; ++i) {
        const Item& it = items[i];
        char stem[64];
        std::snprintf(stem, sizeof stem, "ple_%s_%03zu", e.id.c_str(), i);
        ojson meta = scan_metadata(it.scan, prov);
        meta["predicted_shift_GHz"] = it.shift;
        meta["window_GHz"] = {it.scan.detunings_GHz.front(), it.scan.detunings_GHz.back()};
        meta["warning_resonance_outside_window"] = !it.inside;
        meta["sampling"] = cfg.sampling == SamplingMode::poisson ? "poisson" : "expected_value";
        meta["fit"] = {{"shape", "lorentzian"},
                       {"converged", it.fit.converged},
                       {"center_GHz", it.fit.center_GHz},
                       {"fwhm_MHz", it.fit.fwhm_MHz}};
        out.files.push_back({std::string(stem) + ".csv", scan_csv(it.scan, prov)});
        out.files.push_back({std::string(stem) + ".json", json_text(meta)});
        table.cell(static_cast<std::int64_t>(i)).cell(it.scan.bias_V).cell(it.shift)
            .cell(effective_linewidth(e, it.shift)).cell(it.fit.center_GHz).cell(it.fit.center_stderr_GHz)
            .cell(it.fit.fwhm_MHz).cell(it.fit.fwhm_stderr_MHz).cell(it.fit.converged).cell(it.inside);
        table.end_row();
        out.summary += fmt("V = %6.2f: ", it.scan.bias_V) + "shift " + fmt("%.3f", it.shift) +
                       " GHz, fitted FWHM " + fmt("%.1f", it.fit.fwhm_MHz) + " MHz" +
                       (it.inside ? "" : "  [warning: resonance outside scan window]") + "\n";
    }
    out.files.push_back({"ple_" + e.id + "_summary.csv", table.str()});
    return out;
}

CommandResult cmd_inhomo(const RunConfig& cfg) {
    const auto& plan = cfg.inhomo;
    const Provenance prov = provenance(cfg);
    CommandResult out;
    InhomogeneousSample sample;
    ojson summary;
    if (plan.input_csv) {
        const std::string text = read_text(*plan.input_csv);
        sample = parse_resonances_csv(text);
        summary["source"] = plan.input_csv->filename().string();
        summary["input_hash"] = fnv1a_hex(text);
    } else {
        Rng rng(derive_seed(cfg.seed, 0));
        std::normal_distribution<double> dist(plan.mean_GHz, plan.sigma_GHz);
        for (int i = 0; i < plan.n; ++i) sample.resonances_GHz.push_back(dist(rng));
        sample.spot_count = sample.resonances_GHz.size();
        summary["source"] = "generated";
        summary["distribution"] = {{"kind", "normal"}, {"mean_GHz", plan.mean_GHz}, {"sigma_GHz", plan.sigma_GHz}};
        CsvWriter s(prov, {"resonance_GHz"});
        for (double v : sample.resonances_GHz) {
            s.cell(v);
            s.end_row();
        }
        out.files.push_back({"inhomo_sample.csv", s.str()});
    }
    const WindowStatistic ws = cdf_and_window(sample, plan.window_GHz);
    CsvWriter c(prov, {"resonance_GHz", "cdf"});
    for (const auto& p : ws.cdf) {
        c.cell(p.value_GHz).cell(p.fraction);
        c.end_row();
    }
    out.files.push_back({"inhomo_cdf.csv", c.str()});
    summary["n"] = sample.resonances_GHz.size();
    summary["window_GHz"] = plan.window_GHz;
    summary["best_fraction"] = ws.best_fraction;
    summary["window_start_GHz"] = ws.window_start_GHz;
    summary["window_end_GHz"] = ws.window_start_GHz + plan.window_GHz;
    summary["provenance"] = provenance_json(prov);
    out.files.push_back({"inhomo_summary.json", json_text(summary)});
    out.summary = std::to_string(sample.resonances_GHz.size()) + " resonances; best " +
                  fmt("%.1f", plan.window_GHz) + " GHz window holds " + fmt("%.1f", 100.0 * ws.best_fraction) +
                  " % (from " + fmt("%.3f", ws.window_start_GHz) + " GHz)\n";
    return out;
}

CommandResult cmd_stabilize(const RunConfig& cfg, int jobs) {
    const EmitterModel& e = cfg.emitter(cfg.stabilize.emitter_id);
    StabilizationConfig control = cfg.control;
    control.sampling = cfg.sampling;
    const std::size_t n = static_cast<std::size_t>(cfg.stabilize.seeds);

    struct Item {
        std::uint64_t seed = 0;
        FeedbackLog log;
        StabilizationSummary summary;
    };
    std::vector<Item> items(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        Item& it = items[i];
        it.seed = derive_seed(cfg.seed, i);
        it.log = run_stabilization(control, e, cfg.device, it.seed);
        it.summary = summarize(it.log, control.scan.shape);
    });

    CommandResult out;
    const Provenance prov = provenance(cfg);
    CsvWriter table(prov, {"run", "seed", "feedback", "n_scans", "n_converged", "center_std_GHz",
                           "center_mean_GHz", "mean_fwhm_MHz", "summed_fwhm_MHz", "cr_pass_fraction"});
    double pooled = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Item& it = items[i];
        const Provenance run_prov{cfg.hash, it.seed};
        char stem[32];
        std::snprintf(stem, sizeof stem, "stabilize_%03zu", i);
        const std::string s(stem);
        if (control.feedback) out.files.push_back({s + "_updates.csv", feedback_updates_csv(it.log, run_prov)});
        out.files.push_back({s + "_scans.csv", feedback_scans_csv(it.log, run_prov)});
        out.files.push_back({s + "_summed.csv", summed_counts_csv(it.log, run_prov)});

        const auto& sm = it.summary;
        ojson meta;
        meta["run"] = i;
        meta["seed"] = it.seed;
        meta["master_seed"] = cfg.seed;
        meta["feedback"] = control.feedback;
        meta["emitter"] = emitter_json(e);
        meta["target_shift_GHz"] = it.log.target_GHz;
        meta["operating_voltage_V"] = it.log.operating_voltage_V;
        meta["summary"] = {{"n_scans", sm.n_scans},
                           {"n_converged", sm.n_converged},
                           {"center_std_GHz", sm.center_std_GHz},
                           {"center_mean_GHz", sm.center_mean_GHz},
                           {"mean_fwhm_MHz", sm.mean_fwhm_MHz},
                           {"summed_fwhm_MHz", sm.summed_fwhm_MHz},
                           {"summed_fwhm_stderr_MHz", sm.summed_fwhm_stderr_MHz},
                           {"cr_pass_fraction", sm.cr_pass_fraction}};
        meta["config"] = cfg.document;
        meta["provenance"] = provenance_json(run_prov);
        out.files.push_back({s + "_meta.json", json_text(meta)});

        table.cell(static_cast<std::int64_t>(i)).cell(std::to_string(it.seed)).cell(control.feedback)
            .cell(sm.n_scans).cell(sm.n_converged).cell(sm.center_std_GHz).cell(sm.center_mean_GHz)
            .cell(sm.mean_fwhm_MHz).cell(sm.summed_fwhm_MHz).cell(sm.cr_pass_fraction);
        table.end_row();
        pooled += sm.center_std_GHz * sm.center_std_GHz;
        out.summary += "run " + std::to_string(i) + ": std of fitted centers " +
                       fmt("%.1f", 1e3 * sm.center_std_GHz) + " MHz, mean FWHM " +
                       fmt("%.1f", sm.mean_fwhm_MHz) + " MHz, summed FWHM " +
                       fmt("%.1f", sm.summed_fwhm_MHz) + " MHz\n";
    }
    pooled = std::sqrt(pooled / static_cast<double>(n));
    out.files.push_back({"stabilize_summary.csv", table.str()});
    out.summary += "pooled std of fitted centers over " + std::to_string(n) + " run(s): " +
                   fmt("%.1f", 1e3 * pooled) + " MHz (feedback " + (control.feedback ? "on" : "off") + ")\n";
    return out;
}

CommandResult cmd_calibrate_pulse(const RunConfig& cfg) {
    const auto& plan = cfg.calibrate_pulse;
    const auto& thermal = cfg.device.thermal;
    const Provenance prov = provenance(cfg);
    CsvWriter grid(prov, {"pulse_us", "cooldown_us", "V", "offset_GHz", "safe"});
    CsvWriter boundary(prov, {"pulse_us", "V", "min_safe_cooldown_us"});
    std::string summary;
    for (double pulse : plan.pulses_us) {
        for (double cool : plan.cooldowns_us) {
            const double off = pulsed_resonance_offset(thermal, pulse, cool, plan.voltage_V);
            grid.cell(pulse).cell(cool).cell(plan.voltage_V).cell(off).cell(off == 0.0);
            grid.end_row();
        }
        const double tmin = minimum_safe_cooldown_us(thermal, pulse, plan.voltage_V);
        boundary.cell(pulse).cell(plan.voltage_V).cell(tmin);
        boundary.end_row();
        summary += fmt("pulse %7.1f us: ", pulse) + "minimum safe cooldown " +
                   (std::isinf(tmin) ? std::string("none") : fmt("%.1f", tmin) + " us") + "\n";
    }
    return {{{"pulse_calibration.csv", grid.str()}, {"pulse_boundary.csv", boundary.str()}}, summary};
}

}  // namespace snvtune
