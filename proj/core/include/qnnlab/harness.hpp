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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnnlab/dataset.hpp"
#include "qnnlab/device_model.hpp"
#include "qnnlab/metrics.hpp"
#include "qnnlab/qnn.hpp"
#include "qnnlab/report.hpp"

namespace qnnlab {

/// Worker pool width: hardware concurrency, capped by QNNLAB_THREADS when
/// that is set to a positive integer; never below 1.
std::size_t worker_count();

/// Runs fn(0..n-1) across the worker pool. Results must not depend on the
/// schedule; the first exception is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

enum class DegradeInput { Image, Basis, UniformState };

DegradeInput parse_degrade_input(const std::string &tag);
const char *degrade_input_name(DegradeInput input);

struct DegradeConfig {
    std::uint32_t n_qubits = 8;
    std::uint32_t depth_max = 60;
    std::size_t trials = 10;
    DegradeInput input = DegradeInput::Image;
    /// Encoded amplitudes for DegradeInput::Image (length 2^n_qubits).
    std::vector<double> image;
    std::uint64_t seed = 0;
    /// Depths whose first-trial noisy distribution is kept for imaging.
    std::vector<std::uint32_t> checkpoints;
};

struct DegradeRow {
    std::uint32_t depth = 0;
    double chi2_uniform_mean = 0.0;
    double chi2_uniform_std = 0.0;
    double chi2_ref_mean = 0.0;
    double chi2_ref_std = 0.0;
};

struct DegradeResult {
    std::vector<DegradeRow> rows; // depth 1..depth_max
    double fitted_rate = 0.0;
    double fit_r2 = 0.0;
    std::map<std::uint32_t, ProbDist> checkpoint_dists;
};

/**
 * Random-layer degradation study. Each trial draws depth_max layers of
 * fresh uniform [0, 2pi) weights, then evolves the prepared state layer by
 * layer twice: noisily (density matrix plus readout) and noise-free (the
 * reference baseline). Depth d rows therefore describe prep + the first d
 * layers of that trial's weight draw.
 */
DegradeResult run_degrade(const DeviceNoiseModel &device,
                          const DegradeConfig &config);

/// (depth, chi2_uniform_mean, chi2_uniform_std, chi2_ref_mean,
/// chi2_ref_std) plus trailing fit columns repeated per row.
CsvTable degrade_csv(const DegradeResult &result);

/// First 196 outcomes reshaped to 14x14 row-major and scaled to max = 1
/// for display (an all-zero distribution stays all zero).
std::vector<double> distribution_to_image(const ProbDist &dist);

struct PrepResult {
    /// Ideal readout probabilities p_i = a_i^2, before display scaling.
    ProbDist ideal;
    std::vector<std::pair<std::string, ProbDist>> noisy; // per device
};

/// Mottonen preparation of one encoded sample under each noise model.
PrepResult run_prep(std::span<const double> amplitudes,
                    const std::vector<DeviceNoiseModel> &devices);

/// Argmax accuracy of a model on labelled samples, optionally noisy and
/// optionally shot-sampled, over at most max_samples leading samples.
double evaluate_accuracy(const QnnModel &model,
                         const std::vector<EncodedSample> &samples,
                         const DeviceNoiseModel *noise = nullptr,
                         std::optional<std::uint64_t> shots = std::nullopt,
                         std::uint64_t seed = 0,
                         std::optional<std::size_t> max_samples = std::nullopt);

struct EvalModel {
    std::string name;
    QnnModel model;
    Split split = Split::ZeroOne;
    std::size_t layers = 1;
};

struct EvalDevice {
    std::string name;                      // "base" = noise-free
    const DeviceNoiseModel *device = nullptr; // nullptr = noise-free
};

struct EvalCell {
    std::string model_name;
    std::string device_name;
    std::string split;
    std::size_t layers = 0;
    double accuracy = 0.0;
};

struct EvalConfig {
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_samples;
};

/// Full (model x device) grid over each model's own test split; cells run
/// on the worker pool with per-cell derived seeds.
std::vector<EvalCell>
run_eval_grid(const std::vector<EvalModel> &models,
              const std::vector<EvalDevice> &devices,
              const std::map<Split, std::vector<EncodedSample>> &test_sets,
              const EvalConfig &config);

/// (model, device, split, layers, accuracy) table in grid order.
CsvTable accuracy_csv(const std::vector<EvalCell> &cells);

} // namespace qnnlab
