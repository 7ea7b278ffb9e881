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
#include "qnnlab/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qnnlab/errors.hpp"
#include "qnnlab/mottonen.hpp"
#include "qnnlab/rng.hpp"

namespace qnnlab {

namespace {

/// The entangling layers expanded into primitive rotations:
/// Rot(phi, theta, omega) -> RZ(phi), RY(theta), RZ(omega), so every
/// trainable parameter owns exactly one single-angle gate.
struct ExpandedOp {
    GateOp op;
    // Flattened [L][n][3] parameter index, or npos for CNOTs.
    std::size_t param_index = SIZE_MAX;
};

std::vector<ExpandedOp> expand_layers(const QnnModel &model) {
    std::vector<ExpandedOp> ops;
    const std::uint32_t n = model.n_qubits;
    for (std::size_t l = 0; l < model.layers.n_layers; ++l) {
        for (std::uint32_t q = 0; q < n; ++q) {
            const std::size_t base = (l * n + q) * 3;
            ops.push_back({rz(q, model.layers.data[base]), base});
            ops.push_back({ry(q, model.layers.data[base + 1]), base + 1});
            ops.push_back({rz(q, model.layers.data[base + 2]), base + 2});
        }
        if (n >= 2) {
            const std::uint32_t last = n == 2 ? 1 : n;
            for (std::uint32_t q = 0; q < last; ++q) {
                ops.push_back({cnot(q, (q + 1) % n), SIZE_MAX});
            }
        }
    }
    return ops;
}

GateOp inverse_gate(const GateOp &op) {
    GateOp inv = op;
    for (double &p : inv.params) {
        p = -p;
    }
    return inv; // RY/RZ invert by angle negation; CNOT is self-inverse
}

/// tmp = (Pauli G on qubit) psi, with G = Y for RY gates, Z for RZ.
void apply_generator(const GateOp &op, const PureState &psi,
                     std::vector<Complex> &tmp) {
    const std::size_t mask = std::size_t{1}
                             << qubit_bit(psi.n_qubits(), op.targets[0]);
    const Complex i(0.0, 1.0);
    const auto &amp = psi.amplitudes();
    tmp.resize(amp.size());
    if (op.kind == GateKind::RZ) {
        for (std::size_t idx = 0; idx < amp.size(); ++idx) {
            tmp[idx] = (idx & mask) ? -amp[idx] : amp[idx];
        }
    } else { // RY
        for (std::size_t idx = 0; idx < amp.size(); ++idx) {
            // Y|0> = i|1>, Y|1> = -i|0>
            tmp[idx] = (idx & mask) ? i * amp[idx & ~mask]
                                    : -i * amp[idx | mask];
        }
    }
}

Complex inner(const std::vector<Complex> &bra, const std::vector<Complex> &ket) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) {
        acc += std::conj(bra[i]) * ket[i];
    }
    return acc;
}

std::size_t label_to_class_index(const QnnModel &model, int label) {
    const auto it = std::find(model.class_labels.begin(),
                              model.class_labels.end(), label);
    if (it == model.class_labels.end()) {
        throw ArgumentError("label " + std::to_string(label) +
                            " is not among the model's classes");
    }
    return static_cast<std::size_t>(it - model.class_labels.begin());
}

struct ForwardPieces {
    PureState psi;              // after prep + all layers
    Eigen::VectorXd expvals;
    Eigen::VectorXd probs;
    double loss = 0.0;
    Eigen::VectorXd delta;      // probs - onehot(label)
};

ForwardPieces forward_exact(std::span<const double> input,
                            const QnnModel &model,
                            const std::vector<ExpandedOp> &layer_ops,
                            std::size_t class_index) {
    PureState psi = new_zero_state(model.n_qubits);
    apply_circuit_inplace(psi, synthesize_prep(input));
    for (const ExpandedOp &e : layer_ops) {
        apply_gate_inplace(psi, e.op);
    }
    ForwardPieces f{std::move(psi), {}, {}, 0.0, {}};
    f.expvals.resize(model.n_qubits);
    for (std::uint32_t q = 0; q < model.n_qubits; ++q) {
        f.expvals[q] = expect_z(f.psi, q);
    }
    f.probs = softmax(model.head.weights * f.expvals + model.head.bias);
    f.loss = cross_entropy(f.probs, class_index);
    f.delta = f.probs;
    f.delta[static_cast<Eigen::Index>(class_index)] -= 1.0;
    return f;
}

} // namespace

std::size_t TrainConfig::resolved_epochs() const {
    if (epochs > 0) {
        return epochs;
    }
    switch (split) {
    case Split::ZeroOne:
        return 1;
    case Split::ZeroThree:
        return 2;
    case Split::ZeroNine:
        return 4;
    }
    return 1;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) {
        throw ArgumentError("class label out of range");
    }
    return -std::log(probs[label] + 1e-12);
}

double cross_entropy(const Eigen::VectorXd &probs, std::size_t label) {
    return cross_entropy(
        std::span<const double>(probs.data(),
                                static_cast<std::size_t>(probs.size())),
        label);
}

GradientResult adjoint_gradients(std::span<const double> input,
                                 const QnnModel &model, int label,
                                 const DeviceNoiseModel *noise) {
    if (noise != nullptr) {
        throw UnsupportedError("adjoint differentiation requires unitary "
                               "(noise-free) evolution");
    }
    model.validate();
    const std::size_t class_index = label_to_class_index(model, label);
    const std::vector<ExpandedOp> layer_ops = expand_layers(model);
    ForwardPieces f = forward_exact(input, model, layer_ops, class_index);

    GradientResult g;
    g.loss = f.loss;
    g.head_bias_grads = f.delta;
    g.head_weight_grads = f.delta * f.expvals.transpose();
    g.layer_grads.assign(model.layers.size(), 0.0);

    // Chain coefficients dLoss/d<Z_i> folded into one diagonal
    // observable A = sum_i c_i Z_i.
    const Eigen::VectorXd c = model.head.weights.transpose() * f.delta;
    std::vector<Complex> lambda(f.psi.dim());
    for (std::size_t idx = 0; idx < lambda.size(); ++idx) {
        double a = 0.0;
        for (std::uint32_t q = 0; q < model.n_qubits; ++q) {
            const std::size_t mask = std::size_t{1}
                                     << qubit_bit(model.n_qubits, q);
            a += (idx & mask) ? -c[q] : c[q];
        }
        lambda[idx] = a * f.psi.amplitudes()[idx];
    }
    std::vector<Complex> scratch;

    PureState psi = std::move(f.psi);
    for (auto it = layer_ops.rbegin(); it != layer_ops.rend(); ++it) {
        if (it->param_index != SIZE_MAX) {
            // d<A>/dtheta = Im(<lambda| G |psi_after>) for U=exp(-i G theta/2)
            apply_generator(it->op, psi, scratch);
            g.layer_grads[it->param_index] = inner(lambda, scratch).imag();
        }
        const GateOp inv = inverse_gate(it->op);
        apply_gate_inplace(psi, inv);
        // lambda is not unit norm; roll it back through the raw kernel.
        apply_gate_raw(inv, model.n_qubits, lambda.data());
    }
    return g;
}

double parameter_shift_gradient(std::span<const double> input,
                                const QnnModel &model, int label,
                                std::size_t param_index) {
    model.validate();
    if (param_index >= model.layers.size()) {
        throw DomainError("parameter " + std::to_string(param_index) +
                          " is not a rotation angle");
    }
    const std::size_t class_index = label_to_class_index(model, label);
    const std::vector<ExpandedOp> base_ops = expand_layers(model);
    ForwardPieces f = forward_exact(input, model, base_ops, class_index);
    const Eigen::VectorXd c = model.head.weights.transpose() * f.delta;

    const auto shifted_expvals = [&](double shift) {
        QnnModel m = model;
        m.layers.data[param_index] += shift;
        const std::vector<ExpandedOp> ops = expand_layers(m);
        PureState psi = new_zero_state(m.n_qubits);
        apply_circuit_inplace(psi, synthesize_prep(input));
        for (const ExpandedOp &e : ops) {
            apply_gate_inplace(psi, e.op);
        }
        Eigen::VectorXd e(m.n_qubits);
        for (std::uint32_t q = 0; q < m.n_qubits; ++q) {
            e[q] = expect_z(psi, q);
        }
        return e;
    };

    const Eigen::VectorXd de =
        0.5 * (shifted_expvals(M_PI / 2.0) - shifted_expvals(-M_PI / 2.0));
    return c.dot(de);
}

void adam_step(Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::VectorXd &grads, AdamState &state, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ShapeError("Adam accumulator shapes do not match parameters");
    }
    state.step += 1;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
    state.v = state.beta2 * state.v.array().matrix() +
              (1.0 - state.beta2) * grads.array().square().matrix();
    const double bc1 =
        1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 =
        1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    const Eigen::ArrayXd m_hat = state.m.array() / bc1;
    const Eigen::ArrayXd v_hat = state.v.array() / bc2;
    params.array() -= lr * m_hat / (v_hat.sqrt() + state.epsilon);
}

void TrainingLog::write_csv(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ArgumentError("cannot write training log " + path.string());
    }
    // No timing column: log files must be bit-identical across reruns
    // with the same seed (wallclock lives in the run manifest instead).
    out << "step,epoch,batch_loss\r\n";
    char buf[64];
    for (const TrainingLogRow &row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.batch_loss);
        out << row.step << "," << row.epoch << "," << buf << "\r\n";
    }
}

TrainResult train(const std::vector<EncodedSample> &dataset,
                  const TrainConfig &config) {
    if (dataset.empty()) {
        throw ArgumentError("training dataset is empty");
    }
    if (!(config.learning_rate > 0.0)) {
        throw ArgumentError("learning rate must be > 0");
    }
    if (config.batch_size < 1) {
        throw ArgumentError("batch size must be >= 1");
    }
    const int max_digit = split_max_digit(config.split);
    for (const EncodedSample &s : dataset) {
        if (s.label < 0 || s.label > max_digit) {
            throw ArgumentError("sample label " + std::to_string(s.label) +
                                " outside split " +
                                split_name(config.split));
        }
    }

    std::vector<int> labels(split_class_count(config.split));
    std::iota(labels.begin(), labels.end(), 0);
    QnnModel model =
        init_model(8, config.layers, labels, mix64(config.seed, 0xA11));
    model.train_seed = config.seed;

    // Desk-scale default: full set for 0-1, 8000 samples otherwise.
    std::size_t limit = config.max_train_samples.value_or(
        config.split == Split::ZeroOne ? dataset.size() : 8000);
    limit = std::min(limit, dataset.size());

    const std::size_t n_layer_params = model.layers.size();
    const auto n_head_params = static_cast<std::size_t>(
        model.head.weights.size() + model.head.bias.size());
    const auto total = static_cast<Eigen::Index>(n_layer_params +
                                                 n_head_params);
    AdamState adam(total);

    const auto gather = [&](Eigen::VectorXd &params) {
        for (std::size_t i = 0; i < n_layer_params; ++i) {
            params[static_cast<Eigen::Index>(i)] = model.layers.data[i];
        }
        Eigen::Index k = static_cast<Eigen::Index>(n_layer_params);
        for (Eigen::Index i = 0; i < model.head.weights.size(); ++i) {
            params[k++] = model.head.weights.data()[i];
        }
        for (Eigen::Index i = 0; i < model.head.bias.size(); ++i) {
            params[k++] = model.head.bias[i];
        }
    };
    const auto scatter = [&](const Eigen::VectorXd &params) {
        for (std::size_t i = 0; i < n_layer_params; ++i) {
            model.layers.data[i] = params[static_cast<Eigen::Index>(i)];
        }
        Eigen::Index k = static_cast<Eigen::Index>(n_layer_params);
        for (Eigen::Index i = 0; i < model.head.weights.size(); ++i) {
            model.head.weights.data()[i] = params[k++];
        }
        for (Eigen::Index i = 0; i < model.head.bias.size(); ++i) {
            model.head.bias[i] = params[k++];
        }
    };

    TrainResult result;
    std::uint64_t step = 0;
    Eigen::VectorXd params(total), grads(total);

    for (std::size_t epoch = 0; epoch < config.resolved_epochs(); ++epoch) {
        // Full reshuffle per epoch from a derived seed.
        std::vector<std::size_t> order(dataset.size());
        std::iota(order.begin(), order.end(), 0);
        Rng shuffle_rng(mix64(config.seed, 0x5E0 + epoch));
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i],
                      order[shuffle_rng.uniform_index(i + 1)]);
        }
        order.resize(limit);

        for (std::size_t start = 0; start < order.size();
             start += config.batch_size) {
            const std::size_t end =
                std::min(order.size(), start + config.batch_size);
            grads.setZero();
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const EncodedSample &s = dataset[order[i]];
                const GradientResult g =
                    adjoint_gradients(s.amplitudes, model, s.label);
                batch_loss += g.loss;
                for (std::size_t p = 0; p < n_layer_params; ++p) {
                    grads[static_cast<Eigen::Index>(p)] += g.layer_grads[p];
                }
                Eigen::Index k = static_cast<Eigen::Index>(n_layer_params);
                for (Eigen::Index w = 0; w < g.head_weight_grads.size();
                     ++w) {
                    grads[k++] += g.head_weight_grads.data()[w];
                }
                for (Eigen::Index b = 0; b < g.head_bias_grads.size(); ++b) {
                    grads[k++] += g.head_bias_grads[b];
                }
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            grads *= inv;
            batch_loss *= inv;

            gather(params);
            adam_step(params, grads, adam, config.learning_rate);
            scatter(params);

            ++step;
            result.log.rows.push_back({step, epoch, batch_loss});
        }
    }

    result.model = std::move(model);
    return result;
}

} // namespace qnnlab
