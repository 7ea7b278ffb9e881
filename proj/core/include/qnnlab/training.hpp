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

#include "qnnlab/dataset.hpp"
#include "qnnlab/qnn.hpp"

namespace qnnlab {

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t batch_size = 16;
    /// 0 = split default: 1 epoch for 0-1, 2 for 0-3, 4 for 0-9.
    std::size_t epochs = 0;
    std::uint64_t seed = 0;
    std::size_t layers = 1;
    Split split = Split::ZeroOne;
    /// Desk-scale subsampling knob; absent = full set for 0-1, 8000
    /// samples for the larger splits.
    std::optional<std::size_t> max_train_samples;

    std::size_t resolved_epochs() const;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    std::uint64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(Eigen::Index size)
        : m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)) {}
};

/// -log(probs[label] + 1e-12).
double cross_entropy(std::span<const double> probs, std::size_t label);
double cross_entropy(const Eigen::VectorXd &probs, std::size_t label);

struct GradientResult {
    double loss = 0.0;
    std::vector<double> layer_grads; // shaped like LayerWeights.data
    Eigen::MatrixXd head_weight_grads;
    Eigen::VectorXd head_bias_grads;
};

/**
 * Exact loss gradient for one sample: backward-sweep adjoint through the
 * circuit for every rotation angle, analytic softmax/cross-entropy chain
 * for the dense head. Only defined for noise-free unitary evolution;
 * passing a noise model throws UnsupportedError.
 */
GradientResult adjoint_gradients(std::span<const double> input,
                                 const QnnModel &model, int label,
                                 const DeviceNoiseModel *noise = nullptr);

/**
 * Independent gradient route for one rotation angle: exact per-expval
 * parameter shift e_i(theta +- pi/2) chained through the analytic head
 * gradient. `param_index` addresses the flattened [L][n][3] layer
 * angles; anything else is not a rotation angle and throws DomainError.
 */
double parameter_shift_gradient(std::span<const double> input,
                                const QnnModel &model, int label,
                                std::size_t param_index);

/// Bias-corrected Adam update, in place.
void adam_step(Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::VectorXd &grads, AdamState &state, double lr);

struct TrainingLogRow {
    std::uint64_t step = 0;
    std::size_t epoch = 0;
    double batch_loss = 0.0;
};

struct TrainingLog {
    std::vector<TrainingLogRow> rows;
    void write_csv(const std::filesystem::path &path) const;
};

struct TrainResult {
    QnnModel model;
    TrainingLog log;
};

/**
 * Noise-free supervised training on an encoded dataset. Deterministic
 * for a fixed seed: the shuffle sequence, init, and the fixed per-batch
 * reduction order are all derived from it.
 */
TrainResult train(const std::vector<EncodedSample> &dataset,
                  const TrainConfig &config);

} // namespace qnnlab
