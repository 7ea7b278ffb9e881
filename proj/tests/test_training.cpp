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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "qnnlab/errors.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/training.hpp"

using namespace qnnlab;

namespace {

std::vector<double> random_unit_vector(std::size_t len, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(len);
    double norm_sq = 0.0;
    for (double &x : v) {
        x = rng.uniform();
        norm_sq += x * x;
    }
    for (double &x : v) {
        x /= std::sqrt(norm_sq);
    }
    return v;
}

double loss_at(const QnnModel &model, std::span<const double> input,
               int label) {
    const ForwardResult out = qnn_forward(input, model);
    std::size_t idx = 0;
    while (model.class_labels[idx] != label) {
        ++idx;
    }
    return cross_entropy(out.probs, idx);
}

// Two synthetic clusters that a 1-layer model separates quickly.
std::vector<EncodedSample> synthetic_dataset(std::size_t count) {
    std::vector<EncodedSample> data;
    Rng rng(777);
    for (std::size_t i = 0; i < count; ++i) {
        EncodedSample s;
        s.label = static_cast<int>(i % 2);
        s.amplitudes.assign(256, 0.0);
        const std::size_t hot = s.label == 0 ? 3 : 250;
        s.amplitudes[hot] = 0.95;
        double rest = 1.0 - 0.95 * 0.95;
        for (std::size_t j = 0; j < 8; ++j) {
            const double x = rng.uniform(0.0, rest / 8.0);
            s.amplitudes[10 + 20 * j] = std::sqrt(x);
            rest -= x;
        }
        s.amplitudes[100] = std::sqrt(rest);
        data.push_back(std::move(s));
    }
    return data;
}

} // namespace

TEST_CASE("cross entropy definition") {
    CHECK(std::abs(cross_entropy(std::vector<double>{0.25, 0.75}, 1) +
                   std::log(0.75 + 1e-12)) < 1e-15);
    // The epsilon keeps a zero probability finite.
    CHECK(std::isfinite(cross_entropy(std::vector<double>{1.0, 0.0}, 1)));
}

TEST_CASE("adjoint gradient matches central finite differences") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        QnnModel model = init_model(3, 2, {0, 1, 2}, 40 + s);
        const std::vector<double> input = random_unit_vector(8, 60 + s);
        const int label = static_cast<int>(s % 3);
        const GradientResult g = adjoint_gradients(input, model, label);
        CHECK(std::abs(g.loss - loss_at(model, input, label)) < 1e-12);

        const double h = 1e-5;
        for (std::size_t k = 0; k < model.layers.size(); k += 5) {
            const double saved = model.layers.data[k];
            model.layers.data[k] = saved + h;
            const double up = loss_at(model, input, label);
            model.layers.data[k] = saved - h;
            const double down = loss_at(model, input, label);
            model.layers.data[k] = saved;
            const double fd = (up - down) / (2.0 * h);
            CHECK(std::abs(g.layer_grads[k] - fd) <
                  1e-6 * std::max(1.0, std::abs(fd)));
        }
        // Head gradients against finite differences too.
        const double saved = model.head.bias(0);
        model.head.bias(0) = saved + h;
        const double up = loss_at(model, input, label);
        model.head.bias(0) = saved - h;
        const double down = loss_at(model, input, label);
        model.head.bias(0) = saved;
        CHECK(std::abs(g.head_bias_grads(0) - (up - down) / (2.0 * h)) <
              1e-6);
    }
}

TEST_CASE("parameter shift agrees with the adjoint route") {
    const QnnModel model = init_model(2, 2, {0, 1}, 91);
    const std::vector<double> input = random_unit_vector(4, 92);
    const GradientResult g = adjoint_gradients(input, model, 1);
    for (std::size_t k = 0; k < model.layers.size(); ++k) {
        const double ps = parameter_shift_gradient(input, model, 1, k);
        CHECK(std::abs(g.layer_grads[k] - ps) < 1e-10);
    }
    CHECK_THROWS_AS(
        parameter_shift_gradient(input, model, 1, model.layers.size()),
        DomainError);
}

TEST_CASE("gradients refuse noisy evolution") {
    DeviceNoiseModel noise;
    noise.n_qubits = 2;
    const QnnModel model = init_model(2, 1, {0, 1}, 1);
    const std::vector<double> input = random_unit_vector(4, 2);
    CHECK_THROWS_AS(adjoint_gradients(input, model, 0, &noise),
                    UnsupportedError);
}

TEST_CASE("adam step reproduces the reference update") {
    Eigen::VectorXd params(2);
    params << 1.0, -2.0;
    Eigen::VectorXd grads(2);
    grads << 0.5, -0.25;
    AdamState state(2);
    const double lr = 0.1;
    adam_step(params, grads, state, lr);
    // First step: m_hat = g, v_hat = g^2, update = lr * g / (|g| + eps).
    CHECK(std::abs(params(0) - (1.0 - lr * 0.5 / (0.5 + 1e-8))) < 1e-12);
    CHECK(std::abs(params(1) - (-2.0 + lr * 0.25 / (0.25 + 1e-8))) < 1e-12);
    CHECK(state.step == 1);

    // Second step against a hand-rolled reference.
    Eigen::VectorXd m = 0.9 * (0.1 * grads) + 0.1 * grads;
    Eigen::VectorXd v =
        0.999 * (0.001 * grads.cwiseProduct(grads)) +
        0.001 * grads.cwiseProduct(grads);
    const Eigen::VectorXd before = params;
    adam_step(params, grads, state, lr);
    for (Eigen::Index i = 0; i < 2; ++i) {
        const double m_hat = m(i) / (1.0 - std::pow(0.9, 2));
        const double v_hat = v(i) / (1.0 - std::pow(0.999, 2));
        const double expect =
            before(i) - lr * m_hat / (std::sqrt(v_hat) + 1e-8);
        CHECK(std::abs(params(i) - expect) < 1e-12);
    }
}

TEST_CASE("training is deterministic and reduces the loss") {
    const std::vector<EncodedSample> data = synthetic_dataset(64);
    TrainConfig config;
    config.seed = 5;
    config.epochs = 2;
    config.layers = 1;
    config.split = Split::ZeroOne;
    const TrainResult a = train(data, config);
    const TrainResult b = train(data, config);
    CHECK(a.model.layers.data == b.model.layers.data);
    CHECK(a.model.head.weights == b.model.head.weights);
    REQUIRE(a.log.rows.size() == 8); // 64 samples / batch 16 * 2 epochs
    CHECK(a.log.rows.front().step == 1);
    CHECK(a.log.rows.back().epoch == 1);
    // The synthetic clusters are easy; the loss should drop noticeably.
    CHECK(a.log.rows.back().batch_loss < a.log.rows.front().batch_loss);

    TrainConfig other = config;
    other.seed = 6;
    const TrainResult c = train(data, other);
    CHECK(a.model.layers.data != c.model.layers.data);
}

TEST_CASE("resolved_epochs follows the split defaults") {
    TrainConfig config;
    config.split = Split::ZeroOne;
    CHECK(config.resolved_epochs() == 1);
    config.split = Split::ZeroThree;
    CHECK(config.resolved_epochs() == 2);
    config.split = Split::ZeroNine;
    CHECK(config.resolved_epochs() == 4);
    config.epochs = 7;
    CHECK(config.resolved_epochs() == 7);
}

TEST_CASE("training log CSV uses CRLF and full precision") {
    TrainingLog log;
    log.rows.push_back({1, 0, 0.123456789012345678});
    log.rows.push_back({2, 0, 1.0 / 3.0});
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "qnnlab-log.csv";
    log.write_csv(path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::filesystem::remove(path);
    const std::string text = buf.str();
    CHECK(text.find("step,epoch,batch_loss\r\n") == 0);
    CHECK(text.find("\r\n2,0,0.33333333333333331\r\n") != std::string::npos);
}
