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
#include "qnnlab/qnn.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qnnlab/errors.hpp"
#include "qnnlab/mottonen.hpp"
#include "qnnlab/noisy_circuit.hpp"
#include "qnnlab/rng.hpp"

namespace qnnlab {

double &LayerWeights::at(std::size_t layer, std::size_t qubit,
                         std::size_t param) {
    return data[(layer * n_qubits + qubit) * 3 + param];
}

double LayerWeights::at(std::size_t layer, std::size_t qubit,
                        std::size_t param) const {
    return data[(layer * n_qubits + qubit) * 3 + param];
}

void LayerWeights::validate() const {
    if (data.size() != n_layers * n_qubits * 3) {
        throw ShapeError("layer weights must have shape [L][n][3]");
    }
    for (double w : data) {
        if (!std::isfinite(w)) {
            throw DomainError("layer weight is not finite");
        }
    }
}

void QnnModel::validate() const {
    layers.validate();
    if (layers.n_qubits != n_qubits) {
        throw ShapeError("layer weights qubit count does not match model");
    }
    if (head.weights.cols() != static_cast<Eigen::Index>(n_qubits)) {
        throw ShapeError("dense head input width must equal n_qubits");
    }
    if (head.weights.rows() != head.bias.size() ||
        head.weights.rows() != static_cast<Eigen::Index>(class_labels.size())) {
        throw ShapeError("dense head output width must equal the number of "
                         "class labels");
    }
    if (!head.weights.allFinite() || !head.bias.allFinite()) {
        throw DomainError("dense head contains non-finite entries");
    }
}

std::vector<GateOp> strongly_entangling_layer(std::span<const double> params,
                                              std::uint32_t n_qubits) {
    if (n_qubits < 1) {
        throw ArgumentError("layer needs at least one qubit");
    }
    if (params.size() != static_cast<std::size_t>(n_qubits) * 3) {
        throw ShapeError("layer expects [n][3] angles");
    }
    std::vector<GateOp> ops;
    for (std::uint32_t q = 0; q < n_qubits; ++q) {
        ops.push_back(
            rot(q, params[q * 3], params[q * 3 + 1], params[q * 3 + 2]));
    }
    if (n_qubits >= 2) {
        // Ring of range-1 CNOTs; n = 2 keeps only the forward pair.
        const std::uint32_t last = n_qubits == 2 ? 1 : n_qubits;
        for (std::uint32_t q = 0; q < last; ++q) {
            ops.push_back(cnot(q, (q + 1) % n_qubits));
        }
    }
    return ops;
}

Circuit build_qnn_circuit(std::span<const double> input,
                          const QnnModel &model) {
    model.validate();
    if (input.size() != (std::size_t{1} << model.n_qubits)) {
        throw ShapeError("input length must be 2^n_qubits");
    }
    Circuit circuit = synthesize_prep(input);
    for (std::size_t l = 0; l < model.layers.n_layers; ++l) {
        const std::span<const double> params(
            model.layers.data.data() + l * model.n_qubits * 3,
            static_cast<std::size_t>(model.n_qubits) * 3);
        for (GateOp &op : strongly_entangling_layer(params, model.n_qubits)) {
            circuit.push(std::move(op));
        }
    }
    return circuit;
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits) {
    const Eigen::VectorXd shifted =
        (logits.array() - logits.maxCoeff()).exp();
    return shifted / shifted.sum();
}

namespace {

std::vector<double> expvals_from_dist(const ProbDist &dist) {
    std::vector<double> e(dist.n_qubits);
    for (std::uint32_t q = 0; q < dist.n_qubits; ++q) {
        e[q] = expect_z(dist, q);
    }
    return e;
}

std::vector<double> expvals_from_counts(const ProbDist &dist,
                                        std::uint64_t shots,
                                        std::uint64_t seed) {
    const auto counts = sample_counts(dist, shots, seed);
    std::vector<double> e(dist.n_qubits, 0.0);
    for (const auto &[index, count] : counts) {
        for (std::uint32_t q = 0; q < dist.n_qubits; ++q) {
            const std::size_t mask = std::size_t{1}
                                     << qubit_bit(dist.n_qubits, q);
            const double sign = (index & mask) ? -1.0 : 1.0;
            e[q] += sign * static_cast<double>(count);
        }
    }
    for (double &v : e) {
        v /= static_cast<double>(shots);
    }
    return e;
}

} // namespace

ForwardResult qnn_forward(std::span<const double> input, const QnnModel &model,
                          const DeviceNoiseModel *noise,
                          std::optional<std::uint64_t> shots,
                          std::optional<std::uint64_t> seed) {
    if (shots.has_value() && *shots == 0) {
        throw ArgumentError("shots must be >= 1 when present");
    }
    if (shots.has_value() && !seed.has_value()) {
        throw ArgumentError("sampled evaluation requires a seed");
    }

    const Circuit circuit = build_qnn_circuit(input, model);
    ProbDist dist{0, {}};
    std::vector<double> expvals;
    if (noise != nullptr) {
        const NoisyCircuit noisy = insert_noise(circuit, *noise);
        const DensityMatrix rho = run_noisy(noisy);
        dist = readout_probabilities(noisy, rho);
        expvals = shots.has_value()
                      ? expvals_from_counts(dist, *shots, *seed)
                      : expvals_from_dist(dist);
    } else if (shots.has_value()) {
        PureState psi = new_zero_state(model.n_qubits);
        apply_circuit_inplace(psi, circuit);
        dist = probabilities(psi);
        expvals = expvals_from_counts(dist, *shots, *seed);
    } else {
        PureState psi = new_zero_state(model.n_qubits);
        apply_circuit_inplace(psi, circuit);
        expvals.resize(model.n_qubits);
        for (std::uint32_t q = 0; q < model.n_qubits; ++q) {
            expvals[q] = expect_z(psi, q);
        }
    }

    const Eigen::Map<const Eigen::VectorXd> e(
        expvals.data(), static_cast<Eigen::Index>(expvals.size()));
    ForwardResult result;
    result.probs = softmax(model.head.weights * e + model.head.bias);
    result.expvals = std::move(expvals);
    return result;
}

std::vector<int> predict(const std::vector<std::vector<double>> &batch,
                         const QnnModel &model, const DeviceNoiseModel *noise,
                         std::optional<std::uint64_t> shots,
                         std::optional<std::uint64_t> seed) {
    if (batch.empty()) {
        throw ArgumentError("prediction batch is empty");
    }
    std::vector<int> labels;
    labels.reserve(batch.size());
    for (std::size_t item = 0; item < batch.size(); ++item) {
        std::optional<std::uint64_t> item_seed;
        if (seed.has_value()) {
            item_seed = mix64(*seed, item);
        }
        const ForwardResult fwd =
            qnn_forward(batch[item], model, noise, shots, item_seed);
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < fwd.probs.size(); ++c) {
            if (fwd.probs[c] > fwd.probs[best]) {
                best = c;
            }
        }
        labels.push_back(model.class_labels[static_cast<std::size_t>(best)]);
    }
    return labels;
}

QnnModel init_model(std::uint32_t n_qubits, std::size_t n_layers,
                    std::vector<int> class_labels, std::uint64_t seed) {
    if (class_labels.empty()) {
        throw ArgumentError("model needs at least one class label");
    }
    Rng rng(seed);
    QnnModel model;
    model.n_qubits = n_qubits;
    model.init_seed = seed;
    model.class_labels = std::move(class_labels);
    model.layers.n_layers = n_layers;
    model.layers.n_qubits = n_qubits;
    model.layers.data.resize(n_layers * n_qubits * 3);
    for (double &w : model.layers.data) {
        w = rng.uniform(0.0, 2.0 * M_PI);
    }
    const auto n_classes =
        static_cast<Eigen::Index>(model.class_labels.size());
    const double bound =
        std::sqrt(6.0 / static_cast<double>(n_qubits +
                                            model.class_labels.size()));
    model.head.weights.resize(n_classes, n_qubits);
    for (Eigen::Index r = 0; r < n_classes; ++r) {
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n_qubits);
             ++c) {
            model.head.weights(r, c) = rng.uniform(-bound, bound);
        }
    }
    model.head.bias = Eigen::VectorXd::Zero(n_classes);
    model.validate();
    return model;
}

std::string model_to_json(const QnnModel &model) {
    model.validate();
    nlohmann::json j;
    j["version"] = "qnnmodel/1";
    j["n_qubits"] = model.n_qubits;
    j["class_labels"] = model.class_labels;
    j["layers"] = {
        {"shape",
         {model.layers.n_layers, model.layers.n_qubits, 3}},
        {"data", model.layers.data},
    };
    std::vector<double> w(model.head.weights.data(),
                          model.head.weights.data() +
                              model.head.weights.size());
    std::vector<double> b(model.head.bias.data(),
                          model.head.bias.data() + model.head.bias.size());
    j["head"] = {
        {"weights",
         {{"shape", {model.head.weights.rows(), model.head.weights.cols()}},
          {"data", w}}}, // column-major
        {"bias", b},
    };
    j["provenance"] = {{"init_seed", model.init_seed}};
    if (model.train_seed.has_value()) {
        j["provenance"]["train_seed"] = *model.train_seed;
    }
    return j.dump(2);
}

QnnModel model_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(std::string("model file is not valid JSON: ") +
                          e.what());
    }
    if (!j.contains("version") || j["version"] != "qnnmodel/1") {
        throw SchemaError("model file version must be \"qnnmodel/1\"");
    }
    QnnModel model;
    model.n_qubits = j.at("n_qubits").get<std::uint32_t>();
    model.class_labels = j.at("class_labels").get<std::vector<int>>();
    const auto &layers = j.at("layers");
    const auto shape = layers.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3 || shape[2] != 3) {
        throw SchemaError("layers.shape must be [L, n, 3]");
    }
    model.layers.n_layers = shape[0];
    model.layers.n_qubits = shape[1];
    model.layers.data = layers.at("data").get<std::vector<double>>();

    const auto &head = j.at("head");
    const auto wshape =
        head.at("weights").at("shape").get<std::vector<Eigen::Index>>();
    const auto wdata =
        head.at("weights").at("data").get<std::vector<double>>();
    if (wshape.size() != 2 ||
        static_cast<Eigen::Index>(wdata.size()) != wshape[0] * wshape[1]) {
        throw SchemaError("head.weights shape/data mismatch");
    }
    model.head.weights =
        Eigen::Map<const Eigen::MatrixXd>(wdata.data(), wshape[0], wshape[1]);
    const auto bdata = head.at("bias").get<std::vector<double>>();
    model.head.bias = Eigen::Map<const Eigen::VectorXd>(
        bdata.data(), static_cast<Eigen::Index>(bdata.size()));

    const auto &prov = j.at("provenance");
    model.init_seed = prov.at("init_seed").get<std::uint64_t>();
    if (prov.contains("train_seed")) {
        model.train_seed = prov["train_seed"].get<std::uint64_t>();
    }
    model.validate();
    return model;
}

void save_model(const QnnModel &model, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ArgumentError("cannot write model file " + path.string());
    }
    out << model_to_json(model) << "\n";
}

QnnModel load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ArgumentError("cannot open model file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

} // namespace qnnlab
