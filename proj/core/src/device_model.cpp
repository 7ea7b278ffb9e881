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
#include "qnnlab/device_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

GateKind parse_gate_kind(const std::string &s, const std::string &where) {
    if (s == "rx") return GateKind::RX;
    if (s == "ry") return GateKind::RY;
    if (s == "rz") return GateKind::RZ;
    if (s == "rot") return GateKind::Rot;
    if (s == "h") return GateKind::H;
    if (s == "x") return GateKind::X;
    if (s == "cnot") return GateKind::CNOT;
    throw SchemaError(where + ": unknown gate kind \"" + s + "\"");
}

double require_number(const nlohmann::json &j, const char *field,
                      const std::string &where) {
    if (!j.contains(field) || !j[field].is_number()) {
        throw SchemaError(where + ": missing or non-numeric field \"" +
                          std::string(field) + "\"");
    }
    return j[field].get<double>();
}

} // namespace

const GateCalibration &
DeviceNoiseModel::gate_calibration(GateKind kind,
                                   const std::vector<std::uint32_t> &qs) const {
    const GateCalibration *fallback = nullptr;
    for (const GateCalibration &g : gates) {
        if (g.kind != kind) {
            continue;
        }
        if (g.qubits == qs) {
            return g;
        }
        if (g.qubits.empty()) {
            fallback = &g;
        }
    }
    if (fallback != nullptr) {
        return *fallback;
    }
    throw SchemaError("device \"" + name + "\": no calibration entry (nor "
                      "per-kind default) for gate \"" +
                      gate_kind_name(kind) + "\"");
}

bool DeviceNoiseModel::coupled(std::uint32_t a, std::uint32_t b) const {
    return std::find(coupling_map.begin(), coupling_map.end(),
                     std::make_pair(a, b)) != coupling_map.end();
}

void DeviceNoiseModel::validate() const {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw SchemaError("n_qubits: must be in [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    if (qubits.size() != n_qubits) {
        throw SchemaError("qubits: expected exactly one calibration per "
                          "qubit (" +
                          std::to_string(n_qubits) + "), got " +
                          std::to_string(qubits.size()));
    }
    for (std::size_t q = 0; q < qubits.size(); ++q) {
        const QubitCalibration &c = qubits[q];
        const std::string where = "qubits[" + std::to_string(q) + "]";
        if (!(c.t1_us > 0.0) || !(c.t2_us > 0.0)) {
            throw SchemaError(where + ".t1_us/t2_us: must be > 0");
        }
        if (c.t2_us > 2.0 * c.t1_us) {
            throw PhysicalityError(where + ": t2_us exceeds 2*t1_us");
        }
        if (c.readout_p01 < 0.0 || c.readout_p01 > 1.0 ||
            c.readout_p10 < 0.0 || c.readout_p10 > 1.0) {
            throw SchemaError(where + ".readout_p01/p10: must lie in [0,1]");
        }
    }
    for (std::size_t i = 0; i < coupling_map.size(); ++i) {
        const auto &[a, b] = coupling_map[i];
        if (a >= n_qubits || b >= n_qubits || a == b) {
            throw SchemaError("coupling_map[" + std::to_string(i) +
                              "]: invalid pair");
        }
    }
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const GateCalibration &g = gates[i];
        const std::string where = "gates[" + std::to_string(i) + "]";
        if (g.error < 0.0 || g.error > 1.0) {
            throw SchemaError(where + ".error: must lie in [0,1]");
        }
        if (g.duration_ns < 0.0) {
            throw SchemaError(where + ".duration_ns: must be >= 0");
        }
        if (!g.qubits.empty() &&
            g.qubits.size() != gate_arity(g.kind)) {
            throw SchemaError(where + ".qubits: arity mismatch");
        }
        for (std::uint32_t q : g.qubits) {
            if (q >= n_qubits) {
                throw SchemaError(where + ".qubits: index out of range");
            }
        }
        if (g.kind == GateKind::CNOT && g.qubits.size() == 2 &&
            !coupled(g.qubits[0], g.qubits[1])) {
            throw SchemaError(where + ".qubits: cnot pair (" +
                              std::to_string(g.qubits[0]) + "," +
                              std::to_string(g.qubits[1]) +
                              ") not in coupling_map");
        }
    }
}

DeviceNoiseModel parse_device_model(const std::string &json_text,
                                    const std::string &origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(origin + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw SchemaError(origin + ": top level must be an object");
    }

    DeviceNoiseModel m;
    if (!j.contains("name") || !j["name"].is_string()) {
        throw SchemaError(origin + ": missing string field \"name\"");
    }
    m.name = j["name"].get<std::string>();
    if (!j.contains("n_qubits") || !j["n_qubits"].is_number_integer()) {
        throw SchemaError(origin + ": missing integer field \"n_qubits\"");
    }
    m.n_qubits = j["n_qubits"].get<std::uint32_t>();

    if (!j.contains("qubits") || !j["qubits"].is_array()) {
        throw SchemaError(origin + ": missing array field \"qubits\"");
    }
    for (std::size_t q = 0; q < j["qubits"].size(); ++q) {
        const auto &jq = j["qubits"][q];
        const std::string where = origin + ": qubits[" + std::to_string(q) +
                                  "]";
        QubitCalibration c;
        c.t1_us = require_number(jq, "t1_us", where);
        c.t2_us = require_number(jq, "t2_us", where);
        c.readout_p01 = require_number(jq, "readout_p01", where);
        c.readout_p10 = require_number(jq, "readout_p10", where);
        m.qubits.push_back(c);
    }

    if (!j.contains("gates") || !j["gates"].is_array()) {
        throw SchemaError(origin + ": missing array field \"gates\"");
    }
    for (std::size_t i = 0; i < j["gates"].size(); ++i) {
        const auto &jg = j["gates"][i];
        const std::string where = origin + ": gates[" + std::to_string(i) +
                                  "]";
        if (!jg.contains("kind") || !jg["kind"].is_string()) {
            throw SchemaError(where + ": missing string field \"kind\"");
        }
        GateCalibration g;
        g.kind = parse_gate_kind(jg["kind"].get<std::string>(), where);
        if (!jg.contains("qubits") || !jg["qubits"].is_array()) {
            throw SchemaError(where + ": missing array field \"qubits\"");
        }
        for (const auto &q : jg["qubits"]) {
            if (!q.is_number_integer()) {
                throw SchemaError(where + ".qubits: entries must be ints");
            }
            g.qubits.push_back(q.get<std::uint32_t>());
        }
        g.error = require_number(jg, "error", where);
        g.duration_ns = require_number(jg, "duration_ns", where);
        m.gates.push_back(std::move(g));
    }

    if (!j.contains("coupling_map") || !j["coupling_map"].is_array()) {
        throw SchemaError(origin + ": missing array field \"coupling_map\"");
    }
    for (const auto &jp : j["coupling_map"]) {
        if (!jp.is_array() || jp.size() != 2) {
            throw SchemaError(origin + ": coupling_map entries must be "
                              "[int, int] pairs");
        }
        m.coupling_map.emplace_back(jp[0].get<std::uint32_t>(),
                                    jp[1].get<std::uint32_t>());
    }

    m.validate();
    return m;
}

DeviceNoiseModel load_device_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open device file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_device_model(buf.str(), path.filename().string());
}

DeviceNoiseModel scale_noise(const DeviceNoiseModel &model, double scale) {
    if (scale < 0.0) {
        throw ArgumentError("noise scale must be >= 0");
    }
    DeviceNoiseModel m = model;
    for (GateCalibration &g : m.gates) {
        g.error = std::min(1.0, g.error * scale);
        g.duration_ns *= scale;
    }
    for (QubitCalibration &q : m.qubits) {
        q.readout_p01 = std::min(1.0, q.readout_p01 * scale);
        q.readout_p10 = std::min(1.0, q.readout_p10 * scale);
    }
    return m;
}

} // namespace qnnlab
