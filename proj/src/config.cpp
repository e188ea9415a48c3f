// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/config.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/fit.hpp"
#include "snvtune/geometry.hpp"
#include "snvtune/io.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace snvtune {

using nlohmann::json;

namespace {

struct UnitInfo {
    const char* family;
    double factor;  // to the family's base unit
};

const std::map<std::string, UnitInfo, std::less<>>& unit_table() {
    static const std::map<std::string, UnitInfo, std::less<>> table{
        {"Hz", {"frequency", 1.0}},
        {"kHz", {"frequency", 1e3}},
        {"MHz", {"frequency", 1e6}},
        {"GHz", {"frequency", 1e9}},
        {"THz", {"frequency", 1e12}},
        {"PHz", {"frequency", 1e15}},
        {"cps", {"rate", 1.0}},
        {"kcps", {"rate", 1e3}},
        {"1/s", {"rate", 1.0}},
        {"ns", {"time", 1e-9}},
        {"us", {"time", 1e-6}},
        {"µs", {"time", 1e-6}},
        {"ms", {"time", 1e-3}},
        {"s", {"time", 1.0}},
        {"min", {"time", 60.0}},
        {"h", {"time", 3600.0}},
        {"nm", {"length", 1e-9}},
        {"um", {"length", 1e-6}},
        {"µm", {"length", 1e-6}},
        {"mm", {"length", 1e-3}},
        {"m", {"length", 1.0}},
        {"mV", {"voltage", 1e-3}},
        {"V", {"voltage", 1.0}},
        {"kV", {"voltage", 1e3}},
        {"MPa", {"pressure", 1e6}},
        {"GPa", {"pressure", 1e9}},
        {"strain", {"dimensionless", 1.0}},
        {"1", {"dimensionless", 1.0}},
        {"GHz/strain", {"susceptibility", 1e9}},
        {"THz/strain", {"susceptibility", 1e12}},
        {"PHz/strain", {"susceptibility", 1e15}},
        {"MHz/GHz", {"width_slope", 1e-3}},
        {"GHz/GHz", {"width_slope", 1.0}},
        {"V/GHz", {"gain_p", 1.0}},
        {"V/MHz", {"gain_p", 1e3}},
        {"V/(GHz s)", {"gain_i", 1.0}},
        {"V s/GHz", {"gain_d", 1.0}},
        {"GHz s", {"freq_time", 1.0}},
    };
    return table;
}

const UnitInfo& lookup_unit(std::string_view unit, const std::string& key) {
    const auto& table = unit_table();
    const auto it = table.find(unit);
    if (it == table.end()) throw ConfigError(key, "unknown unit '" + std::string(unit) + "'");
    return it->second;
}

std::string join_path(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "." + b;
}

// View of one JSON object that remembers which keys were read.
class Node {
public:
    Node(const json* j, std::string path) : j_(j), path_(std::move(path)) {
        if (j_ && !j_->is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_ && j_->contains(key); }
    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] std::string key(const std::string& k) const { return join_path(path_, k); }

    const json* raw(const std::string& k) {
        used_.insert(k);
        if (!j_) return nullptr;
        const auto it = j_->find(k);
        return it == j_->end() ? nullptr : &*it;
    }

    double qty(const std::string& k, std::string_view unit, double fallback) {
        const json* v = raw(k);
        return v ? tagged_value(*v, key(k), unit) : fallback;
    }

    double positive_qty(const std::string& k, std::string_view unit, double fallback) {
        const double v = qty(k, unit, fallback);
        if (!(v > 0.0)) throw ConfigError(key(k), "must be > 0");
        return v;
    }

    std::optional<double> opt_qty(const std::string& k, std::string_view unit) {
        const json* v = raw(k);
        if (!v || v->is_null()) return std::nullopt;
        return tagged_value(*v, key(k), unit);
    }

    long long integer(const std::string& k, long long fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_number_integer()) throw ConfigError(key(k), "must be an integer");
        return v->get<long long>();
    }

    std::uint64_t unsigned_integer(const std::string& k, std::uint64_t fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
            throw ConfigError(key(k), "must be a non-negative integer");
        }
        return v->get<std::uint64_t>();
    }

    std::string str(const std::string& k, const std::string& fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError(key(k), "must be a string");
        return v->get<std::string>();
    }

    bool boolean(const std::string& k, bool fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_boolean()) throw ConfigError(key(k), "must be true or false");
        return v->get<bool>();
    }

    double number(const std::string& k, double fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_number()) throw ConfigError(key(k), "must be a number");
        return v->get<double>();
    }

    Node child(const std::string& k) { return Node(raw(k), key(k)); }

    /// {"values": [...], "unit": u} or {"start": q, "stop": q, "points": n}.
    std::vector<double> qty_list(const std::string& k, std::string_view unit,
                                 std::vector<double> fallback) {
        const json* v = raw(k);
        if (!v) return fallback;
        Node n(v, key(k));
        std::vector<double> out;
        if (n.has("values")) {
            const json* vals = n.raw("values");
            const std::string u = n.str("unit", "");
            if (!vals->is_array()) throw ConfigError(n.key("values"), "must be an array");
            for (const auto& x : *vals) {
                if (!x.is_number()) throw ConfigError(n.key("values"), "entries must be numbers");
                out.push_back(convert_unit(x.get<double>(), u, unit, n.key("unit")));
            }
        } else {
            const double a = n.qty("start", unit, NAN);
            const double b = n.qty("stop", unit, NAN);
            const long long pts = n.integer("points", 0);
            if (std::isnan(a) || std::isnan(b)) throw ConfigError(key(k), "needs values or start/stop/points");
            if (pts < 1) throw ConfigError(n.key("points"), "must be >= 1");
            for (long long i = 0; i < pts; ++i) {
                out.push_back(pts == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(pts - 1));
            }
        }
        n.finish();
        if (out.empty()) throw ConfigError(key(k), "must not be empty");
        return out;
    }

    void finish() const {
        if (!j_) return;
        for (const auto& [k, _] : j_->items()) {
            if (!used_.count(k)) throw ConfigError(key(k), "unknown key");
        }
    }

private:
    static double tagged_value(const json& v, const std::string& key, std::string_view unit) {
        if (!v.is_object() || !v.contains("value") || !v.contains("unit")) {
            throw ConfigError(key, "must be {\"value\": number, \"unit\": \"" + std::string(unit) + "\"}");
        }
        if (v.size() != 2) throw ConfigError(key, "only value and unit are allowed");
        if (!v["value"].is_number()) throw ConfigError(key + ".value", "must be a number");
        if (!v["unit"].is_string()) throw ConfigError(key + ".unit", "must be a string");
        const double x = convert_unit(v["value"].get<double>(), v["unit"].get<std::string>(), unit, key);
        if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
        return x;
    }

    const json* j_;
    std::string path_;
    std::set<std::string> used_;
};

template <class F>
void guarded(const std::string& key, F&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

void require(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) throw ConfigError(key, constraint);
}

StrainSusceptibilities read_susceptibilities(Node n, const StrainSusceptibilities& d) {
    StrainSusceptibilities s;
    s.t_perp = n.qty("t_perp", "GHz/strain", d.t_perp);
    s.t_par = n.qty("t_par", "GHz/strain", d.t_par);
    s.d = n.qty("d", "GHz/strain", d.d);
    s.f = n.qty("f", "GHz/strain", d.f);
    n.finish();
    return s;
}

PhysicsParams read_physics(Node n) {
    const PhysicsParams d;
    PhysicsParams p;
    p.nu0_GHz = n.qty("nu0", "GHz", d.nu0_GHz);
    p.spin_orbit.lambda_g = n.qty("lambda_g", "GHz", d.spin_orbit.lambda_g);
    p.spin_orbit.lambda_u = n.qty("lambda_u", "GHz", d.spin_orbit.lambda_u);
    p.ground = read_susceptibilities(n.child("ground"), d.ground);
    p.excited = read_susceptibilities(n.child("excited"), d.excited);
    n.finish();
    guarded(n.path(), [&] { p.validate(); });
    return p;
}

DeviceModel read_device(Node n) {
    DeviceModel dev;
    {
        Node g = n.child("geometry");
        auto& x = dev.geometry;
        x.w_spring_um = g.positive_qty("w_spring", "um", x.w_spring_um);
        x.w_waveguide_um = g.positive_qty("w_waveguide", "um", x.w_waveguide_um);
        x.w_support_um = g.positive_qty("w_support", "um", x.w_support_um);
        x.w_tp_um = g.positive_qty("w_tp", "um", x.w_tp_um);
        x.d_support_um = g.positive_qty("d_support", "um", x.d_support_um);
        x.l_waveguide_um = g.positive_qty("l_waveguide", "um", x.l_waveguide_um);
        x.l_tp_um = g.positive_qty("l_tp", "um", x.l_tp_um);
        x.gap_height_um = g.positive_qty("gap_height", "um", x.gap_height_um);
        x.h_waveguide_um = g.positive_qty("h_waveguide", "um", x.h_waveguide_um);
        x.youngs_modulus_GPa = g.positive_qty("youngs_modulus", "GPa", x.youngs_modulus_GPa);
        x.poisson_ratio = g.number("poisson_ratio", x.poisson_ratio);
        g.finish();
        guarded(g.path(), [&] { x.validate(); });
    }
    {
        Node c = n.child("calibration");
        auto& x = dev.calibration;
        x.v_ref_V = c.positive_qty("v_ref", "V", x.v_ref_V);
        x.eps_ref = c.positive_qty("eps_ref", "strain", x.eps_ref);
        x.v_max_V = c.positive_qty("v_max", "V", x.v_max_V);
        if (const json* r = c.raw("tensor_ratios")) {
            const std::string key = c.key("tensor_ratios");
            require(r->is_object(), key, "must be an object with yy, zz, yz, zx, xy");
            Node t(r, key);
            const char* names[5] = {"yy", "zz", "yz", "zx", "xy"};
            for (int i = 0; i < 5; ++i) x.tensor_ratios[std::size_t(i)] = t.number(names[i], x.tensor_ratios[std::size_t(i)]);
            t.finish();
        }
        c.finish();
        guarded(c.path(), [&] { x.validate(); });
    }
    {
        Node t = n.child("thermal");
        auto& x = dev.thermal;
        x.cooldown_time_us = t.positive_qty("cooldown_time", "us", x.cooldown_time_us);
        x.max_pulse_us = t.positive_qty("max_pulse", "us", x.max_pulse_us);
        x.heat_shift_coeff_GHz = t.qty("heat_shift_coeff", "GHz", x.heat_shift_coeff_GHz);
        x.relaxation_time_us = t.positive_qty("relaxation_time", "us", x.relaxation_time_us);
        x.reference_voltage_V = t.positive_qty("reference_voltage", "V", x.reference_voltage_V);
        t.finish();
        guarded(t.path(), [&] { x.validate(); });
    }
    n.finish();
    guarded(join_path(n.path(), "calibration.v_max"), [&] { (void)pull_in_guard(dev.geometry, dev.calibration.v_max_V); });
    return dev;
}

EmitterModel read_emitter(Node n, const PhysicsParams& physics, const DeviceModel& device) {
    EmitterModel e;
    e.physics = physics;
    e.id = n.str("id", "");
    require(!e.id.empty(), n.key("id"), "must be a non-empty string");
    require(e.id.find_first_of(",/\\ \"") == std::string::npos, n.key("id"),
            "must not contain commas, slashes, quotes or spaces");
    const std::string orient = n.str("orientation", "[111]");
    guarded(n.key("orientation"), [&] { e.orientation = parse_orientation(orient); });
    if (const json* pos = n.raw("position"); pos && !pos->is_null()) {
        Node p(pos, n.key("position"));
        BeamPosition b;
        b.x_um = p.qty("x", "um", 0.0);
        b.y_um = p.qty("y", "um", 0.0);
        b.z_um = p.qty("z", "um", 0.0);
        p.finish();
        require(inside_beam(device.geometry, b), p.path(), "must lie inside the waveguide");
        e.position = b;
    }
    e.nu0_GHz = n.qty("nu0", "GHz", physics.nu0_GHz);
    e.fwhm0_MHz = n.positive_qty("fwhm0", "MHz", e.fwhm0_MHz);
    e.peak_rate_cps = n.qty("peak_rate", "cps", e.peak_rate_cps);
    e.background_rate_cps = n.qty("background_rate", "cps", e.background_rate_cps);
    e.broadening_slope_MHz_per_GHz = n.qty("broadening_slope", "MHz/GHz", e.broadening_slope_MHz_per_GHz);
    n.finish();
    guarded(n.path(), [&] { e.validate(); });
    return e;
}

LockInNormalization parse_normalization(const std::string& s, const std::string& key) {
    if (s == "model") return LockInNormalization::model;
    if (s == "raw") return LockInNormalization::raw;
    throw ConfigError(key, "must be \"model\" or \"raw\"");
}

StabilizationConfig read_control(Node n) {
    StabilizationConfig c;
    c.duration_s = n.qty("duration", "s", c.duration_s);
    c.feedback = n.boolean("feedback", c.feedback);
    c.target_shift_GHz = n.qty("target_shift", "GHz", c.target_shift_GHz);
    {
        Node d = n.child("drift");
        c.drift.ou_tau_s = d.positive_qty("ou_tau", "s", c.drift.ou_tau_s);
        c.drift.ou_sigma_GHz = d.qty("ou_sigma", "GHz", c.drift.ou_sigma_GHz);
        c.drift.jump_rate_per_s = d.qty("jump_rate", "1/s", c.drift.jump_rate_per_s);
        c.drift.jump_sigma_GHz = d.qty("jump_sigma", "GHz", c.drift.jump_sigma_GHz);
        d.finish();
        guarded(d.path(), [&] { c.drift.validate(); });
    }
    {
        Node l = n.child("lockin");
        c.lockin.mod_amp_V = l.positive_qty("mod_amp", "V", c.lockin.mod_amp_V);
        c.lockin.periods_per_probe = static_cast<int>(l.integer("periods_per_probe", c.lockin.periods_per_probe));
        c.lockin.bins_per_period = static_cast<int>(l.integer("bins_per_period", c.lockin.bins_per_period));
        c.lockin.probe_duration_s = l.positive_qty("probe_duration", "s", c.lockin.probe_duration_s);
        c.lockin.normalization = parse_normalization(l.str("normalization", "model"), l.key("normalization"));
        l.finish();
        guarded(l.path(), [&] { c.lockin.validate(); });
    }
    {
        Node p = n.child("pid");
        c.pid.kp = p.qty("kp", "V/GHz", c.pid.kp);
        c.pid.ki = p.qty("ki", "V/(GHz s)", c.pid.ki);
        c.pid.kd = p.qty("kd", "V s/GHz", c.pid.kd);
        c.pid.output_min_V = p.qty("output_min", "V", c.pid.output_min_V);
        c.pid.output_max_V = p.qty("output_max", "V", c.pid.output_max_V);
        c.pid.update_rate_Hz = p.positive_qty("update_rate", "Hz", c.pid.update_rate_Hz);
        c.pid.integral_limit = p.positive_qty("integral_limit", "GHz s", c.pid.integral_limit);
        p.finish();
        guarded(p.path(), [&] { c.pid.validate(); });
    }
    {
        Node r = n.child("cr_check");
        c.cr.probe_duration_s = r.positive_qty("probe_duration", "s", c.cr.probe_duration_s);
        c.cr.photon_threshold = static_cast<int>(r.integer("photon_threshold", c.cr.photon_threshold));
        c.cr.max_attempts = static_cast<int>(r.integer("max_attempts", c.cr.max_attempts));
        r.finish();
        guarded(r.path(), [&] { c.cr.validate(); });
    }
    {
        Node s = n.child("scan");
        c.scan.n_scans = static_cast<int>(s.integer("n_scans", c.scan.n_scans));
        c.scan.half_span_GHz = s.positive_qty("half_span", "GHz", c.scan.half_span_GHz);
        c.scan.points = static_cast<int>(s.integer("points", c.scan.points));
        c.scan.dwell_s = s.positive_qty("dwell", "s", c.scan.dwell_s);
        const std::string shape = s.str("shape", "voigt");
        guarded(s.key("shape"), [&] { c.scan.shape = parse_line_shape(shape); });
        s.finish();
        guarded(s.path(), [&] { c.scan.validate(); });
    }
    n.finish();
    require(c.duration_s > 0.0, n.key("duration"), "must be > 0");
    return c;
}

std::vector<std::string> string_list(Node& n, const std::string& k) {
    std::vector<std::string> out;
    const json* v = n.raw(k);
    if (!v) return out;
    require(v->is_array(), n.key(k), "must be an array of strings");
    for (const auto& x : *v) {
        require(x.is_string(), n.key(k), "must be an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

void check_known(const RunConfig& cfg, const std::string& id, const std::string& key) {
    guarded(key, [&] { (void)cfg.emitter(id); });
}

}  // namespace

double convert_unit(double value, std::string_view unit, std::string_view target_unit,
                    const std::string& key) {
    const UnitInfo& from = lookup_unit(unit, key);
    const UnitInfo& to = lookup_unit(target_unit, key);
    if (std::string_view(from.family) != to.family) {
        throw ConfigError(key, "unit '" + std::string(unit) + "' is not a " + to.family +
                                   " (expected e.g. '" + std::string(target_unit) + "')");
    }
    return value * (from.factor / to.factor);
}

const EmitterModel& RunConfig::emitter(std::string_view id) const {
    for (const auto& e : emitters) {
        if (e.id == id) return e;
    }
    std::string known;
    for (const auto& e : emitters) known += (known.empty() ? "" : ", ") + e.id;
    throw InputError("unknown emitter id '" + std::string(id) + "'; known ids: " + known);
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    Node root(&doc, "");
    cfg.seed = root.unsigned_integer("seed", 0);
    cfg.output_dir = root.str("output_dir", cfg.output_dir);
    const std::string sampling = root.str("sampling", "poisson");
    if (sampling == "poisson") {
        cfg.sampling = SamplingMode::poisson;
    } else if (sampling == "expected_value") {
        cfg.sampling = SamplingMode::expected_value;
    } else {
        throw ConfigError("sampling", "must be \"poisson\" or \"expected_value\"");
    }
    (void)root.str("description", "");

    cfg.physics = read_physics(root.child("physics"));
    cfg.device = read_device(root.child("device"));

    if (const json* list = root.raw("emitters")) {
        require(list->is_array(), "emitters", "must be an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < list->size(); ++i) {
            const std::string key = "emitters[" + std::to_string(i) + "]";
            EmitterModel e = read_emitter(Node(&(*list)[i], key), cfg.physics, cfg.device);
            require(ids.insert(e.id).second, key + ".id", "duplicate emitter id '" + e.id + "'");
            cfg.emitters.push_back(std::move(e));
        }
    }
    require(!cfg.emitters.empty(), "emitters", "must list at least one emitter");

    cfg.control = read_control(root.child("control"));
    require(cfg.control.pid.output_max_V <= cfg.device.calibration.v_max_V, "control.pid.output_max",
            "must not exceed device.calibration.v_max");

    {
        Node n = root.child("tune_curve");
        auto& p = cfg.tune_curve;
        p.emitter_ids = string_list(n, "emitters");
        p.v_min_V = n.qty("v_min", "V", p.v_min_V);
        p.v_max_V = n.qty("v_max", "V", std::min(p.v_max_V, cfg.device.calibration.v_max_V));
        p.points = static_cast<int>(n.integer("points", p.points));
        n.finish();
        require(p.points >= 1, n.key("points"), "must be >= 1");
        require(p.v_min_V >= 0.0 && p.v_min_V <= p.v_max_V, n.key("v_min"), "must lie in [0, v_max]");
        for (const auto& id : p.emitter_ids) check_known(cfg, id, n.key("emitters"));
    }
    {
        Node n = root.child("ple");
        auto& p = cfg.ple;
        p.emitter_id = n.str("emitter", cfg.emitters.front().id);
        p.voltages_V = n.qty_list("voltages", "V", p.voltages_V);
        p.center_GHz = n.opt_qty("center", "GHz");
        p.half_span_GHz = n.qty("half_span", "GHz", p.half_span_GHz);
        p.points = static_cast<int>(n.integer("points", p.points));
        p.dwell_s = n.qty("dwell", "s", p.dwell_s);
        n.finish();
        check_known(cfg, p.emitter_id, n.key("emitter"));
        require(p.half_span_GHz > 0.0, n.key("half_span"), "must be > 0");
        require(p.points >= 2, n.key("points"), "must be >= 2");
        require(p.dwell_s > 0.0, n.key("dwell"), "must be > 0");
    }
    {
        Node n = root.child("inhomo");
        auto& p = cfg.inhomo;
        const std::string input = n.str("input", "");
        if (!input.empty()) {
            std::filesystem::path path(input);
            p.input_csv = path.is_absolute() ? path : base_dir / path;
        }
        p.n = static_cast<int>(n.integer("n", p.n));
        p.mean_GHz = n.qty("mean", "GHz", p.mean_GHz);
        p.sigma_GHz = n.qty("sigma", "GHz", p.sigma_GHz);
        p.window_GHz = n.qty("window", "GHz", p.window_GHz);
        n.finish();
        require(p.n >= 1, n.key("n"), "must be >= 1");
        require(p.sigma_GHz >= 0.0, n.key("sigma"), "must be >= 0");
        require(p.window_GHz >= 0.0, n.key("window"), "must be >= 0");
    }
    {
        Node n = root.child("stabilize");
        auto& p = cfg.stabilize;
        p.emitter_id = n.str("emitter", cfg.emitters.front().id);
        p.seeds = static_cast<int>(n.integer("seeds", p.seeds));
        n.finish();
        check_known(cfg, p.emitter_id, n.key("emitter"));
        require(p.seeds >= 1, n.key("seeds"), "must be >= 1");
    }
    {
        Node n = root.child("calibrate_pulse");
        auto& p = cfg.calibrate_pulse;
        p.voltage_V = n.qty("voltage", "V", std::min(p.voltage_V, cfg.device.calibration.v_max_V));
        p.pulses_us = n.qty_list("pulses", "us", {10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 80.0, 100.0});
        p.cooldowns_us = n.qty_list("cooldowns", "us", {250.0, 500.0, 750.0, 1000.0, 1250.0, 1500.0, 2000.0, 3000.0});
        n.finish();
        require(p.voltage_V >= 0.0 && p.voltage_V <= cfg.device.calibration.v_max_V, n.key("voltage"),
                "must lie in [0, device.calibration.v_max]");
        for (double x : p.pulses_us) require(x > 0.0, n.key("pulses"), "entries must be > 0");
        for (double x : p.cooldowns_us) require(x >= 0.0, n.key("cooldowns"), "entries must be >= 0");
    }
    root.finish();
    cfg.hash = fnv1a_hex(doc.dump());
    cfg.document = doc;
    return cfg;
}

json load_config_json(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const InputError& e) {
        throw ConfigError("<file>", e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON in ") + path.string() + ": " + e.what());
    }
}

void set_override(json& doc, std::string_view dotted_key, json value) {
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted_key.find('.', start);
        const std::string part(dotted_key.substr(start, dot == std::string_view::npos ? dotted_key.npos : dot - start));
        if (!node->is_object()) *node = json::object();
        if (dot == std::string_view::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

json tagged(double value, std::string_view unit) {
    return json{{"value", value}, {"unit", std::string(unit)}};
}

}  // namespace snvtune
