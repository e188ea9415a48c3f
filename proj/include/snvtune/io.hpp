// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief CSV and JSON serialization of scans, samples and feedback logs.
 *
 * CSV files are comma separated with '.' decimals and a mandatory header row.
 * Provenance lines starting with '#' precede the header; readers skip them.
 * Floating-point columns carry 12 significant digits, integer columns are exact.
 */

#pragma once

#include "snvtune/inhomogeneous.hpp"
#include "snvtune/spectroscopy.hpp"
#include "snvtune/stabilization.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace snvtune {

struct Provenance {
    std::string config_hash;  ///< 16 hex digits
    std::uint64_t seed = 0;
};

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view bytes);

/// "%.12g"; non-finite values print as nan / inf / -inf.
[[nodiscard]] std::string format_double(double v);

/// '#' lines naming the tool version, config hash and seed.
[[nodiscard]] std::string provenance_lines(const Provenance& prov);

[[nodiscard]] nlohmann::ordered_json provenance_json(const Provenance& prov);

/// Small CSV table writer: provenance lines, header, rows.
class CsvWriter {
public:
    CsvWriter(const Provenance& prov, std::vector<std::string> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::int64_t v);
    CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
    CsvWriter& cell(bool v) { return cell(static_cast<std::int64_t>(v ? 1 : 0)); }
    CsvWriter& cell(std::string_view v);
    void end_row();

    [[nodiscard]] const std::string& str() const noexcept { return text_; }

private:
    void separator();

    std::string text_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

/// Parsed CSV: header names and string cells, '#' lines dropped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; InputError if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] bool has_column(std::string_view name) const;
};

[[nodiscard]] CsvTable parse_csv(std::string_view text);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
/// Writes atomically enough for our use: creates parent directories, truncates.
void write_text(const std::filesystem::path& path, std::string_view text);

/// Scan CSV: detuning_GHz, counts[, expected_counts].
[[nodiscard]] std::string scan_csv(const ScanRecord& scan, const Provenance& prov);
/// Sidecar metadata: dwell_s, bias_V, seed, emitter_id plus provenance.
[[nodiscard]] nlohmann::ordered_json scan_metadata(const ScanRecord& scan, const Provenance& prov);
/// Reads a scan CSV and its metadata sidecar back into a record.
[[nodiscard]] ScanRecord read_scan(const std::filesystem::path& csv_path,
                                   const std::filesystem::path& metadata_path);
/// Parses scan CSV text alone (metadata fields left at defaults).
[[nodiscard]] ScanRecord parse_scan_csv(std::string_view text);

/// Resonance list with a resonance_GHz column.
[[nodiscard]] InhomogeneousSample parse_resonances_csv(std::string_view text);

[[nodiscard]] std::string feedback_updates_csv(const FeedbackLog& log, const Provenance& prov);
[[nodiscard]] std::string feedback_scans_csv(const FeedbackLog& log, const Provenance& prov);
/// Summed counts of all scans versus detuning from the lock point.
[[nodiscard]] std::string summed_counts_csv(const FeedbackLog& log, const Provenance& prov);

}  // namespace snvtune
