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

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "qnnlab/device_model.hpp"
#include "qnnlab/state.hpp"

namespace qnnlab {

/// Rotation angles of the entangling layers, shape [n_layers][n_qubits][3].
struct LayerWeights {
    std::size_t n_layers = 0;
    std::size_t n_qubits = 0;
    std::vector<double> data; // row-major [layer][qubit][param]

    double &at(std::size_t layer, std::size_t qubit, std::size_t param);
    double at(std::size_t layer, std::size_t qubit, std::size_t param) const;
    std::size_t size() const { return data.size(); }
    void validate() const;
};

/// Classical dense softmax head on the per-qubit <Z> readout.
struct DenseHead {
    Eigen::MatrixXd weights; // [n_classes][n_qubits]
    Eigen::VectorXd bias;    // [n_classes]
};

struct QnnModel {
    std::uint32_t n_qubits = 0;
    LayerWeights layers;
    DenseHead head;
    std::vector<int> class_labels;
    std::uint64_t init_seed = 0;
    std::optional<std::uint64_t> train_seed;

    void validate() const;
};

/**
 * One strongly entangling layer: Rot(phi, theta, omega) on every qubit,
 * then the nearest-neighbour CNOT ring i -> (i+1) mod n. n = 1 emits no
 * CNOT; n = 2 emits only CNOT(0,1) (the reverse pair would duplicate it).
 */
std::vector<GateOp> strongly_entangling_layer(std::span<const double> params,
                                              std::uint32_t n_qubits);

/// Amplitude preparation followed by every entangling layer.
Circuit build_qnn_circuit(std::span<const double> input,
                          const QnnModel &model);

Eigen::VectorXd softmax(const Eigen::VectorXd &logits);

struct ForwardResult {
    std::vector<double> expvals;  // <Z_i>, one per qubit
    Eigen::VectorXd probs;        // softmax class probabilities
};

/**
 * Full forward pass. Noise absent: exact pure-state expvals. Noise
 * present: density evolution through the rewritten circuit with readout
 * confusion folded into the final distribution. With `shots`, expvals are
 * estimated from sampled counts (a seed is then mandatory).
 */
ForwardResult qnn_forward(std::span<const double> input, const QnnModel &model,
                          const DeviceNoiseModel *noise = nullptr,
                          std::optional<std::uint64_t> shots = std::nullopt,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// Argmax class labels per input; ties break toward the lowest label.
/// Per-item seeds derive from the master seed and the item index.
std::vector<int> predict(const std::vector<std::vector<double>> &batch,
                         const QnnModel &model,
                         const DeviceNoiseModel *noise = nullptr,
                         std::optional<std::uint64_t> shots = std::nullopt,
                         std::optional<std::uint64_t> seed = std::nullopt);

/// Fresh model: layer angles uniform in [0, 2pi), head uniform in
/// +-sqrt(6 / (fan_in + fan_out)), both drawn from `seed`.
QnnModel init_model(std::uint32_t n_qubits, std::size_t n_layers,
                    std::vector<int> class_labels, std::uint64_t seed);

/// "qnnmodel/1" JSON, bit-exact round trip.
void save_model(const QnnModel &model, const std::filesystem::path &path);
QnnModel load_model(const std::filesystem::path &path);
std::string model_to_json(const QnnModel &model);
QnnModel model_from_json(const std::string &text);

} // namespace qnnlab
