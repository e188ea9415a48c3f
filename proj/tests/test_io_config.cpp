// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/config.hpp"
#include "snvtune/errors.hpp"
#include "snvtune/io.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace snvtune;

namespace {

const std::filesystem::path kConfigDir = std::filesystem::path(SNVTUNE_SOURCE_DIR) / "configs";

nlohmann::json default_doc() { return load_config_json(kConfigDir / "default.json"); }

std::string config_error_key(const nlohmann::json& doc) {
    try {
        (void)parse_config(doc, kConfigDir);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("FNV-1a test vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV writing and parsing") {
    CsvWriter w(Provenance{"0123456789abcdef", 7}, {"a", "b"});
    w.cell(1.25).cell(std::string_view("x"));
    w.end_row();
    CHECK_THROWS_AS(w.end_row(), ContractViolation);
    const auto t = parse_csv(w.str());
    CHECK(w.str().rfind("# tool: snvtune", 0) == 0);
    CHECK(w.str().find("# seed: 7") != std::string::npos);
    REQUIRE(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][t.column("b")] == "x");
    CHECK_THROWS_AS((void)t.column("c"), InputError);
    const auto c = parse_csv("# note\n\nv\n1\n# mid\n2\n");
    CHECK(c.rows.size() == 2);
}

TEST_CASE("scan round trip") {
    ScanRecord s;
    s.detunings_GHz = {-0.5, 0.0, 0.5};
    s.counts = {3, 40, 2};
    s.expected = {2.5, 39.75, 2.25};
    s.dwell_s = 0.05;
    const auto text = scan_csv(s, Provenance{"x", 1});
    const auto r = parse_scan_csv(text);
    CHECK(r.detunings_GHz == s.detunings_GHz);
    CHECK(r.counts == s.counts);
    CHECK(r.expected == s.expected);
    CHECK_THROWS_AS((void)parse_scan_csv("detuning_GHz,counts\n0,1\n1,x\n"), InputError);
    CHECK_THROWS_AS((void)parse_scan_csv("detuning_GHz,counts\n0,1\n0,2\n"), InputError);
}

TEST_CASE("resonance list parsing") {
    const auto s = parse_resonances_csv("# spots: 3\nresonance_GHz\n1.5\n-2\n");
    CHECK(s.resonances_GHz == std::vector<double>{1.5, -2.0});
    CHECK_THROWS_AS((void)parse_resonances_csv("freq\n1\n"), InputError);
}

TEST_CASE("unit conversion") {
    CHECK(convert_unit(1.0, "PHz/strain", "GHz/strain", "k") == doctest::Approx(1e6));
    CHECK(convert_unit(1.0, "MHz", "GHz", "k") == doctest::Approx(1e-3));
    CHECK(convert_unit(2.0, "um", "nm", "k") == doctest::Approx(2000.0));
    CHECK(convert_unit(3.0, "kcps", "cps", "k") == doctest::Approx(3000.0));
    CHECK(convert_unit(1.0, "h", "s", "k") == doctest::Approx(3600.0));
    try {
        (void)convert_unit(1.0, "nm", "GHz", "physics.nu0");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "physics.nu0");
    }
    CHECK_THROWS_AS((void)convert_unit(1.0, "parsec", "um", "k"), ConfigError);
}

TEST_CASE("default configuration") {
    const auto doc = default_doc();
    const RunConfig a = parse_config(doc, kConfigDir);
    const RunConfig b = parse_config(doc, kConfigDir);
    CHECK(a.hash == b.hash);
    CHECK(a.hash.size() == 16);
    CHECK(a.emitters.size() == 5);
    CHECK(a.device.calibration.v_max_V == 90.0);
    CHECK(a.control.pid.output_max_V <= a.device.calibration.v_max_V);
    CHECK(a.emitter("B0").in_bulk());
    CHECK_THROWS_AS((void)a.emitter("Z9"), InputError);
    CHECK(a.inhomo.input_csv.has_value());

    auto changed = doc;
    set_override(changed, "seed", 5);
    const RunConfig c = parse_config(changed, kConfigDir);
    CHECK(c.seed == 5);
    CHECK(c.hash != a.hash);
    set_override(changed, "control.duration", tagged(2.0, "h"));
    CHECK(parse_config(changed, kConfigDir).control.duration_s == doctest::Approx(7200.0));
}

TEST_CASE("configuration errors name the offending key") {
    auto doc = default_doc();
    doc["physics"]["nu0_typo"] = tagged(1.0, "GHz");
    CHECK(config_error_key(doc) == "physics.nu0_typo");

    doc = default_doc();
    doc["device"]["calibration"]["v_max"] = tagged(90.0, "nm");
    CHECK(config_error_key(doc) == "device.calibration.v_max");

    doc = default_doc();
    doc["device"]["calibration"]["v_max"] = 90.0;
    CHECK(config_error_key(doc) == "device.calibration.v_max");

    doc = default_doc();
    doc["ple"]["emitter"] = "nope";
    CHECK(config_error_key(doc) == "ple.emitter");

    doc = default_doc();
    doc["emitters"][1]["id"] = doc["emitters"][0]["id"];
    CHECK(config_error_key(doc).rfind("emitters", 0) == 0);

    doc = default_doc();
    doc["control"]["drift"]["ou_tau"] = tagged(-1.0, "s");
    CHECK(config_error_key(doc) == "control.drift.ou_tau");

    doc = default_doc();
    doc["control"]["pid"]["output_max"] = tagged(120.0, "V");
    CHECK(config_error_key(doc).rfind("control.pid", 0) == 0);

    CHECK_THROWS_AS((void)load_config_json(kConfigDir / "does_not_exist.json"), ConfigError);
}
