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
#include <doctest.h>

#include <string>

#include "qnnlab/device_model.hpp"
#include "qnnlab/errors.hpp"

using namespace qnnlab;

namespace {

const std::string kValid = R"({
  "name": "unit-test-device",
  "n_qubits": 2,
  "qubits": [
    {"t1_us": 100.0, "t2_us": 80.0, "readout_p01": 0.01, "readout_p10": 0.02},
    {"t1_us": 90.0, "t2_us": 70.0, "readout_p01": 0.03, "readout_p10": 0.04}
  ],
  "gates": [
    {"kind": "ry", "qubits": [], "error": 0.001, "duration_ns": 35.5},
    {"kind": "cnot", "qubits": [], "error": 0.01, "duration_ns": 300.0},
    {"kind": "cnot", "qubits": [0, 1], "error": 0.02, "duration_ns": 280.0}
  ],
  "coupling_map": [[0, 1], [1, 0]]
})";

std::string patched(const std::string &from, const std::string &to) {
    std::string text = kValid;
    text.replace(text.find(from), from.size(), to);
    return text;
}

} // namespace

TEST_CASE("a valid calibration file parses") {
    const DeviceNoiseModel m = parse_device_model(kValid);
    CHECK(m.name == "unit-test-device");
    CHECK(m.n_qubits == 2);
    CHECK(m.qubits[1].t1_us == 90.0);
    CHECK(m.coupled(0, 1));
    CHECK(m.coupled(1, 0));
    CHECK_FALSE(m.coupled(0, 0));
}

TEST_CASE("exact gate entries win over per-kind defaults") {
    const DeviceNoiseModel m = parse_device_model(kValid);
    CHECK(m.gate_calibration(GateKind::CNOT, {0, 1}).error == 0.02);
    CHECK(m.gate_calibration(GateKind::CNOT, {1, 0}).error == 0.01);
    CHECK(m.gate_calibration(GateKind::RY, {1}).error == 0.001);
    CHECK_THROWS_AS(m.gate_calibration(GateKind::H, {0}), SchemaError);
}

TEST_CASE("schema errors name the offending field") {
    CHECK_THROWS_AS(parse_device_model("not json"), SchemaError);
    CHECK_THROWS_AS(parse_device_model("[1, 2]"), SchemaError);
    CHECK_THROWS_WITH_AS(
        parse_device_model(patched("\"t1_us\": 100.0", "\"t1\": 100.0")),
        doctest::Contains("t1_us"), SchemaError);
    CHECK_THROWS_WITH_AS(
        parse_device_model(patched("\"n_qubits\": 2", "\"n_qubits\": 99")),
        doctest::Contains("n_qubits"), SchemaError);
    CHECK_THROWS_AS(
        parse_device_model(patched("\"error\": 0.001", "\"error\": 1.5")),
        SchemaError);
}

TEST_CASE("unphysical relaxation times are rejected") {
    CHECK_THROWS_AS(
        parse_device_model(patched("\"t2_us\": 80.0", "\"t2_us\": 250.0")),
        PhysicalityError);
}

TEST_CASE("cnot entries must respect the coupling map") {
    CHECK_THROWS_AS(
        parse_device_model(patched("\"coupling_map\": [[0, 1], [1, 0]]",
                                   "\"coupling_map\": [[1, 0]]")),
        SchemaError);
}

TEST_CASE("scale_noise scales errors and clamps at 1") {
    const DeviceNoiseModel m = parse_device_model(kValid);
    const DeviceNoiseModel half = scale_noise(m, 0.5);
    CHECK(half.gate_calibration(GateKind::CNOT, {0, 1}).error == 0.01);
    CHECK(half.qubits[0].readout_p01 == 0.005);
    const DeviceNoiseModel huge = scale_noise(m, 1000.0);
    CHECK(huge.gate_calibration(GateKind::CNOT, {0, 1}).error == 1.0);
    const DeviceNoiseModel off = scale_noise(m, 0.0);
    CHECK(off.gate_calibration(GateKind::RY, {0}).error == 0.0);
    CHECK(off.qubits[1].readout_p10 == 0.0);
    CHECK_THROWS_AS(scale_noise(m, -1.0), ArgumentError);
}

TEST_CASE("shipped fixture files load and validate") {
    const std::filesystem::path dir =
        std::filesystem::path(QNNLAB_SOURCE_DIR) / "data" / "devices";
    for (const char *stem :
         {"example-lownoise", "example-midnoise", "example-highnoise",
          "example-faulty-cnot01"}) {
        CAPTURE(stem);
        const DeviceNoiseModel m =
            load_device_model(dir / (std::string(stem) + ".json"));
        CHECK(m.n_qubits == 8);
        CHECK(m.name == stem);
    }
    const DeviceNoiseModel faulty =
        load_device_model(dir / "example-faulty-cnot01.json");
    CHECK(faulty.gate_calibration(GateKind::CNOT, {0, 1}).error == 1.0);
    CHECK(faulty.gate_calibration(GateKind::CNOT, {0, 2}).error < 0.01);
}
