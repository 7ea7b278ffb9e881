// Copyright 2026 The qnnlab developers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qnnlab {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 quoting for a single field.
std::string csv_escape(const std::string &field);

/// CRLF-terminated records; every row must match the header width.
void write_csv(const std::filesystem::path &path, const CsvTable &table);
std::string csv_to_string(const CsvTable &table);

CsvTable parse_csv(const std::string &text);
CsvTable read_csv(const std::filesystem::path &path);

/// Fixed-format double used for all CSV numeric cells ("%.17g": shortest
/// round-trip-safe form across platforms we target).
std::string csv_double(double value);

/// Binary (P5) portable graymap, maxval 255. `pixels` is row-major in
/// [0, 1]; values are scaled by 255 and rounded.
void write_pgm(const std::filesystem::path &path, std::size_t width,
               std::size_t height, const std::vector<double> &pixels);

std::uint32_t crc32_of(const std::vector<std::uint8_t> &bytes);
std::uint32_t crc32_of_file(const std::filesystem::path &path);

/**
 * Reproducibility record for one CLI run. Output checksums cover every
 * file the run wrote; fixture checksums cover the inputs it read.
 */
struct RunManifest {
    std::string artifact_version = "qnnrun/1";
    std::string command_line;
    std::string config_json; // serialized snapshot of the resolved config
    std::uint64_t master_seed = 0;
    double wallclock_ms = 0.0;
    std::map<std::string, std::uint32_t> fixtures; // name -> crc32
    std::map<std::string, std::uint32_t> outputs;  // relative path -> crc32
};

std::string manifest_to_json(const RunManifest &manifest);
RunManifest manifest_from_json(const std::string &text);

/// Writes to a sibling temp file first and renames over the target, so a
/// manifest either exists completely or not at all.
void write_manifest_atomic(const RunManifest &manifest,
                           const std::filesystem::path &path);
RunManifest read_manifest(const std::filesystem::path &path);

struct ConsolidatedReport {
    /// One merged table per distinct CSV header, keyed by the header
    /// joined with ','; each gains a leading "source" column.
    std::map<std::string, CsvTable> merged;
    std::vector<std::string> warnings; // e.g. incomplete accuracy grids
    std::size_t manifests_checked = 0;
    std::size_t files_verified = 0;
};

/**
 * Scans `run_dir` for *.manifest.json, re-hashes every listed output and
 * throws IntegrityError on any mismatch, then merges all referenced CSVs.
 * A directory without manifests is an ArgumentError.
 */
ConsolidatedReport consolidate_run_dir(const std::filesystem::path &run_dir);

/// Writes each merged table as <out_dir>/merged-<k>.csv plus a summary.
std::vector<std::filesystem::path>
write_consolidated(const ConsolidatedReport &report,
                   const std::filesystem::path &out_dir);

} // namespace qnnlab
