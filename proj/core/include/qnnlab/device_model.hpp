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
#include <string>
#include <utility>
#include <vector>

#include "qnnlab/state.hpp"

namespace qnnlab {

struct QubitCalibration {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double readout_p01 = 0.0; // P(read 1 | true 0)
    double readout_p10 = 0.0; // P(read 0 | true 1)
};

struct GateCalibration {
    GateKind kind;
    std::vector<std::uint32_t> qubits; // empty = per-kind default entry
    double error = 0.0;
    double duration_ns = 0.0;
};

/**
 * Per-device noise description, loaded from a calibration JSON file.
 * Field names carry units (t1_us, duration_ns) so real backend-properties
 * dumps can be transcribed directly.
 */
struct DeviceNoiseModel {
    std::string name;
    std::uint32_t n_qubits = 0;
    std::vector<QubitCalibration> qubits;
    std::vector<GateCalibration> gates;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> coupling_map;

    /// Exact (kind, qubits) entry, else the per-kind default (qubits []).
    /// Throws SchemaError when neither exists.
    const GateCalibration &
    gate_calibration(GateKind kind,
                     const std::vector<std::uint32_t> &qubits) const;

    bool coupled(std::uint32_t a, std::uint32_t b) const;

    /// Enforces every invariant; throws SchemaError / PhysicalityError
    /// naming the offending field.
    void validate() const;
};

DeviceNoiseModel load_device_model(const std::filesystem::path &path);
DeviceNoiseModel parse_device_model(const std::string &json_text,
                                    const std::string &origin = "<string>");

/// Copy with gate errors, readout probabilities, and gate durations scaled
/// by `scale` (error probabilities clamped at 1). scale = 0 is noise-free.
DeviceNoiseModel scale_noise(const DeviceNoiseModel &model, double scale);

} // namespace qnnlab
