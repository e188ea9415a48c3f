// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/io.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/version.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace snvtune {

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string provenance_lines(const Provenance& prov) {
    std::string s;
    s += "# tool: ";
    s += kToolName;
    s += " ";
    s += kToolVersion;
    s += "\n# config_hash: " + prov.config_hash;
    s += "\n# seed: " + std::to_string(prov.seed) + "\n";
    return s;
}

nlohmann::ordered_json provenance_json(const Provenance& prov) {
    return {{"tool", std::string(kToolName) + " " + kToolVersion},
            {"config_hash", prov.config_hash},
            {"seed", prov.seed}};
}

CsvWriter::CsvWriter(const Provenance& prov, std::vector<std::string> header)
    : text_(provenance_lines(prov)), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::separator() {
    if (in_row_ == columns_) throw ContractViolation("CsvWriter: too many cells in row");
    if (in_row_++) text_ += ',';
}

CsvWriter& CsvWriter::cell(double v) {
    separator();
    text_ += format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
    separator();
    text_ += std::to_string(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
    if (v.find_first_of(",\"\n") != std::string_view::npos) {
        throw ContractViolation("CsvWriter: cell needs quoting: " + std::string(v));
    }
    separator();
    text_ += v;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) throw ContractViolation("CsvWriter: short row");
    text_ += '\n';
    in_row_ = 0;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InputError("CSV has no column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
    for (const auto& h : header) {
        if (h == name) return true;
    }
    return false;
}

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        out.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        if (s == "nan") return std::nan("");
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw InputError("CSV line " + std::to_string(line) + ": not a number: '" + s + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& s, std::size_t line) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError("CSV line " + std::to_string(line) + ": not an integer: '" + s + "'");
    }
    return v;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw InputError("CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw InputError("CSV has no header row");
    return t;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string scan_csv(const ScanRecord& scan, const Provenance& prov) {
    scan.validate();
    const bool with_expected = !scan.expected.empty();
    std::vector<std::string> header{"detuning_GHz", "counts"};
    if (with_expected) header.emplace_back("expected_counts");
    CsvWriter w(prov, header);
    for (std::size_t i = 0; i < scan.counts.size(); ++i) {
        w.cell(scan.detunings_GHz[i]).cell(scan.counts[i]);
        if (with_expected) w.cell(scan.expected[i]);
        w.end_row();
    }
    return w.str();
}

nlohmann::ordered_json scan_metadata(const ScanRecord& scan, const Provenance& prov) {
    nlohmann::ordered_json j;
    j["emitter_id"] = scan.emitter_id;
    j["bias_V"] = scan.bias_V;
    j["dwell_s"] = scan.dwell_s;
    j["seed"] = scan.seed;
    j["points"] = scan.counts.size();
    j["provenance"] = provenance_json(prov);
    return j;
}

ScanRecord parse_scan_csv(std::string_view text) {
    const CsvTable t = parse_csv(text);
    const auto cd = t.column("detuning_GHz");
    const auto cc = t.column("counts");
    const bool with_expected = t.has_column("expected_counts");
    const auto ce = with_expected ? t.column("expected_counts") : 0;
    ScanRecord r;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        r.detunings_GHz.push_back(to_double(t.rows[i][cd], i + 2));
        r.counts.push_back(to_int(t.rows[i][cc], i + 2));
        if (with_expected) r.expected.push_back(to_double(t.rows[i][ce], i + 2));
    }
    r.validate();
    return r;
}

ScanRecord read_scan(const std::filesystem::path& csv_path,
                     const std::filesystem::path& metadata_path) {
    ScanRecord r = parse_scan_csv(read_text(csv_path));
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_text(metadata_path));
        r.emitter_id = meta.at("emitter_id").get<std::string>();
        r.bias_V = meta.at("bias_V").get<double>();
        r.dwell_s = meta.at("dwell_s").get<double>();
        r.seed = meta.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError("bad scan metadata " + metadata_path.string() + ": " + e.what());
    }
    r.validate();
    return r;
}

InhomogeneousSample parse_resonances_csv(std::string_view text) {
    const CsvTable t = parse_csv(text);
    const auto c = t.column("resonance_GHz");
    InhomogeneousSample s;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double v = to_double(t.rows[i][c], i + 2);
        if (!std::isfinite(v)) throw InputError("non-finite resonance on CSV line " + std::to_string(i + 2));
        s.resonances_GHz.push_back(v);
    }
    s.spot_count = s.resonances_GHz.size();
    return s;
}

std::string feedback_updates_csv(const FeedbackLog& log, const Provenance& prov) {
    CsvWriter w(prov, {"time_s", "dc_voltage_V", "error_estimate_GHz", "cr_pass", "cr_attempts",
                       "true_detuning_GHz"});
    for (const auto& u : log.updates) {
        w.cell(u.time_s).cell(u.dc_voltage_V).cell(u.error_GHz_estimate).cell(u.cr_pass)
            .cell(u.cr_attempts).cell(u.true_detuning_GHz);
        w.end_row();
    }
    return w.str();
}

std::string feedback_scans_csv(const FeedbackLog& log, const Provenance& prov) {
    CsvWriter w(prov, {"scan", "start_time_s", "center_GHz", "center_stderr_GHz", "fwhm_MHz",
                       "converged"});
    for (std::size_t i = 0; i < log.scans.size(); ++i) {
        const auto& s = log.scans[i];
        w.cell(static_cast<std::int64_t>(i)).cell(s.time_s).cell(s.fitted_center_GHz)
            .cell(s.center_stderr_GHz).cell(s.fwhm_MHz).cell(s.converged);
        w.end_row();
    }
    return w.str();
}

std::string summed_counts_csv(const FeedbackLog& log, const Provenance& prov) {
    CsvWriter w(prov, {"detuning_GHz", "summed_counts"});
    for (std::size_t i = 0; i < log.scan_detunings_GHz.size(); ++i) {
        double total = 0.0;
        for (const auto& row : log.scan_counts) total += row[i];
        w.cell(log.scan_detunings_GHz[i]);
        // Poisson rows hold integer counts; expected-value rows are fractional.
        if (total == std::floor(total) && std::abs(total) < 9e15) {
            w.cell(static_cast<std::int64_t>(total));
        } else {
            w.cell(total);
        }
        w.end_row();
    }
    return w.str();
}

}  // namespace snvtune
