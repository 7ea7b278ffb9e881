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
#include "qnnlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <zlib.h>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ArgumentError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path &path, const std::string &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ArgumentError("cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ArgumentError("short write to " + path.string());
    }
}

std::string join_header(const std::vector<std::string> &header) {
    std::string key;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) {
            key += ',';
        }
        key += header[i];
    }
    return key;
}

} // namespace

std::string csv_escape(const std::string &field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_to_string(const CsvTable &table) {
    std::string out;
    const auto emit_row = [&out](const std::vector<std::string> &row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += csv_escape(row[i]);
        }
        out += "\r\n";
    };
    emit_row(table.header);
    for (const auto &row : table.rows) {
        if (row.size() != table.header.size()) {
            throw ShapeError("CSV row width differs from header");
        }
        emit_row(row);
    }
    return out;
}

void write_csv(const std::filesystem::path &path, const CsvTable &table) {
    dump(path, csv_to_string(table));
}

CsvTable parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_started) {
                in_quotes = true;
                field_started = true;
            } else {
                throw SchemaError("stray quote inside unquoted CSV field");
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            end_record();
            break;
        case '\n':
            end_record();
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) {
        throw SchemaError("unterminated quoted CSV field");
    }
    if (field_started || !record.empty() || !field.empty()) {
        end_record();
    }

    if (records.empty()) {
        throw SchemaError("CSV text has no header");
    }
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() == 1 && records[r][0].empty()) {
            continue; // trailing blank line
        }
        if (records[r].size() != table.header.size()) {
            throw SchemaError("CSV record " + std::to_string(r) + " has " +
                              std::to_string(records[r].size()) +
                              " fields, header has " +
                              std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path &path) {
    const std::vector<std::uint8_t> bytes = slurp(path);
    return parse_csv(std::string(bytes.begin(), bytes.end()));
}

std::string csv_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_pgm(const std::filesystem::path &path, std::size_t width,
               std::size_t height, const std::vector<double> &pixels) {
    if (pixels.size() != width * height) {
        throw ShapeError("pixel count does not match image dimensions");
    }
    std::string out = "P5\n" + std::to_string(width) + " " +
                      std::to_string(height) + "\n255\n";
    for (double p : pixels) {
        if (!(p >= 0.0) || !(p <= 1.0)) {
            throw DomainError("PGM pixel values must lie in [0, 1]");
        }
        out += static_cast<char>(std::lround(p * 255.0));
    }
    dump(path, out);
}

std::uint32_t crc32_of(const std::vector<std::uint8_t> &bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32_of_file(const std::filesystem::path &path) {
    return crc32_of(slurp(path));
}

std::string manifest_to_json(const RunManifest &manifest) {
    nlohmann::json j;
    j["artifact_version"] = manifest.artifact_version;
    j["command_line"] = manifest.command_line;
    j["config"] = manifest.config_json.empty()
                      ? nlohmann::json::object()
                      : nlohmann::json::parse(manifest.config_json);
    j["master_seed"] = manifest.master_seed;
    j["wallclock_ms"] = manifest.wallclock_ms;
    j["fixtures"] = nlohmann::json::object();
    for (const auto &[name, crc] : manifest.fixtures) {
        j["fixtures"][name] = crc;
    }
    j["outputs"] = nlohmann::json::object();
    for (const auto &[name, crc] : manifest.outputs) {
        j["outputs"][name] = crc;
    }
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("manifest is not valid JSON: ") +
                          e.what());
    }
    RunManifest m;
    try {
        m.artifact_version = j.at("artifact_version").get<std::string>();
        if (m.artifact_version != "qnnrun/1") {
            throw SchemaError("unsupported manifest version \"" +
                              m.artifact_version + "\"");
        }
        m.command_line = j.at("command_line").get<std::string>();
        m.config_json = j.at("config").dump();
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        m.wallclock_ms = j.at("wallclock_ms").get<double>();
        for (const auto &[name, crc] : j.at("fixtures").items()) {
            m.fixtures[name] = crc.get<std::uint32_t>();
        }
        for (const auto &[name, crc] : j.at("outputs").items()) {
            m.outputs[name] = crc.get<std::uint32_t>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(std::string("manifest field error: ") + e.what());
    }
    return m;
}

void write_manifest_atomic(const RunManifest &manifest,
                           const std::filesystem::path &path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    dump(tmp, manifest_to_json(manifest));
    std::filesystem::rename(tmp, path);
}

RunManifest read_manifest(const std::filesystem::path &path) {
    const std::vector<std::uint8_t> bytes = slurp(path);
    return manifest_from_json(std::string(bytes.begin(), bytes.end()));
}

namespace {

void check_accuracy_grid(const std::string &key, const CsvTable &table,
                         std::vector<std::string> &warnings) {
    const auto col = [&](const std::string &name) -> std::ptrdiff_t {
        const auto it =
            std::find(table.header.begin(), table.header.end(), name);
        return it == table.header.end() ? -1 : it - table.header.begin();
    };
    const std::ptrdiff_t c_device = col("device");
    const std::ptrdiff_t c_split = col("split");
    const std::ptrdiff_t c_layers = col("layers");
    if (c_device < 0 || c_split < 0 || c_layers < 0) {
        return; // not an accuracy grid
    }
    std::set<std::string> all_layers;
    std::map<std::pair<std::string, std::string>, std::set<std::string>>
        per_group;
    for (const auto &row : table.rows) {
        all_layers.insert(row[static_cast<std::size_t>(c_layers)]);
        per_group[{row[static_cast<std::size_t>(c_device)],
                   row[static_cast<std::size_t>(c_split)]}]
            .insert(row[static_cast<std::size_t>(c_layers)]);
    }
    for (const auto &[group, layers] : per_group) {
        for (const std::string &l : all_layers) {
            if (!layers.contains(l)) {
                warnings.push_back("incomplete grid [" + key + "]: device " +
                                   group.first + " split " + group.second +
                                   " is missing layers=" + l);
            }
        }
    }
}

} // namespace

ConsolidatedReport consolidate_run_dir(const std::filesystem::path &run_dir) {
    if (!std::filesystem::is_directory(run_dir)) {
        throw ArgumentError(run_dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> manifest_paths;
    for (const auto &entry :
         std::filesystem::recursive_directory_iterator(run_dir)) {
        if (entry.is_regular_file() &&
            entry.path().filename().string().ends_with(".manifest.json")) {
            manifest_paths.push_back(entry.path());
        }
    }
    std::sort(manifest_paths.begin(), manifest_paths.end());
    if (manifest_paths.empty()) {
        throw ArgumentError("no *.manifest.json found under " +
                            run_dir.string());
    }

    ConsolidatedReport report;
    for (const std::filesystem::path &mp : manifest_paths) {
        const RunManifest manifest = read_manifest(mp);
        ++report.manifests_checked;
        for (const auto &[rel, crc] : manifest.outputs) {
            const std::filesystem::path fp = mp.parent_path() / rel;
            if (!std::filesystem::exists(fp)) {
                throw IntegrityError("manifest " + mp.string() +
                                     " lists missing output " + rel);
            }
            if (crc32_of_file(fp) != crc) {
                throw IntegrityError("checksum mismatch for " + fp.string());
            }
            ++report.files_verified;
            if (fp.extension() != ".csv") {
                continue;
            }
            CsvTable csv = read_csv(fp);
            const std::string key = join_header(csv.header);
            auto [it, fresh] = report.merged.try_emplace(key);
            if (fresh) {
                it->second.header = csv.header;
                it->second.header.insert(it->second.header.begin(), "source");
            }
            for (auto &row : csv.rows) {
                row.insert(row.begin(), rel);
                it->second.rows.push_back(std::move(row));
            }
        }
    }
    for (const auto &[key, table] : report.merged) {
        check_accuracy_grid(key, table, report.warnings);
    }
    return report;
}

std::vector<std::filesystem::path>
write_consolidated(const ConsolidatedReport &report,
                   const std::filesystem::path &out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    std::size_t index = 0;
    for (const auto &[key, table] : report.merged) {
        const std::filesystem::path p =
            out_dir / ("merged-" + std::to_string(index++) + ".csv");
        write_csv(p, table);
        written.push_back(p);
    }
    CsvTable summary;
    summary.header = {"manifests_checked", "files_verified", "warnings"};
    std::string joined;
    for (const std::string &w : report.warnings) {
        if (!joined.empty()) {
            joined += "; ";
        }
        joined += w;
    }
    summary.rows.push_back({std::to_string(report.manifests_checked),
                            std::to_string(report.files_verified), joined});
    const std::filesystem::path sp = out_dir / "report-summary.csv";
    write_csv(sp, summary);
    written.push_back(sp);
    return written;
}

} // namespace qnnlab
