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
#include "qnnlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

#include "qnnlab/errors.hpp"
#include "qnnlab/mottonen.hpp"
#include "qnnlab/noisy_circuit.hpp"
#include "qnnlab/rng.hpp"

namespace qnnlab {

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QNNLAB_THREADS")) {
        char *end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) {
            n = std::min(n, static_cast<std::size_t>(cap));
        }
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) {
    if (n == 0) {
        return;
    }
    const std::size_t workers = std::min(worker_count(), n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(body);
    }
    for (std::thread &t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

DegradeInput parse_degrade_input(const std::string &tag) {
    if (tag == "image") return DegradeInput::Image;
    if (tag == "basis") return DegradeInput::Basis;
    if (tag == "uniform") return DegradeInput::UniformState;
    throw ArgumentError("unknown degrade input \"" + tag +
                        "\" (expected image, basis or uniform)");
}

const char *degrade_input_name(DegradeInput input) {
    switch (input) {
    case DegradeInput::Image:
        return "image";
    case DegradeInput::Basis:
        return "basis";
    case DegradeInput::UniformState:
        return "uniform";
    }
    return "?";
}

namespace {

Circuit build_prep_circuit(const DegradeConfig &config) {
    Circuit prep;
    prep.n_qubits = config.n_qubits;
    switch (config.input) {
    case DegradeInput::Image:
        if (config.image.size() != std::size_t{1} << config.n_qubits) {
            throw ShapeError("degrade image must hold 2^n_qubits "
                             "amplitudes");
        }
        return synthesize_prep(config.image);
    case DegradeInput::Basis:
        return prep; // |0...0> needs no gates
    case DegradeInput::UniformState:
        for (std::uint32_t q = 0; q < config.n_qubits; ++q) {
            prep.push(h(q));
        }
        return prep;
    }
    throw ArgumentError("unknown degrade input");
}

/// Sample standard deviation over one metric column; 0 for a single trial.
double column_std(const std::vector<double> &values, double mean) {
    if (values.size() < 2) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : values) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

} // namespace

DegradeResult run_degrade(const DeviceNoiseModel &device,
                          const DegradeConfig &config) {
    if (config.depth_max < 1) {
        throw ArgumentError("depth_max must be >= 1");
    }
    if (config.trials < 1) {
        throw ArgumentError("trials must be >= 1");
    }
    device.validate();
    const Circuit prep = build_prep_circuit(config);
    const std::uint32_t n = config.n_qubits;
    const std::size_t depths = config.depth_max;
    const std::size_t params_per_layer = std::size_t{n} * 3;

    std::vector<double> chi2u(config.trials * depths);
    std::vector<double> chi2r(config.trials * depths);
    std::vector<std::optional<ProbDist>> trial0_dists(depths + 1);

    parallel_for(config.trials, [&](std::size_t trial) {
        Rng rng(mix64(config.seed, 0xDE60 + trial));
        std::vector<double> weights(depths * params_per_layer);
        for (double &w : weights) {
            w = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }

        const NoisyCircuit noisy_prep = insert_noise(prep, device);
        DensityMatrix rho = run_noisy(noisy_prep);
        PureState psi = new_zero_state(n);
        apply_circuit_inplace(psi, prep);

        for (std::size_t d = 1; d <= depths; ++d) {
            const std::span<const double> layer_params(
                weights.data() + (d - 1) * params_per_layer,
                params_per_layer);
            Circuit layer;
            layer.n_qubits = n;
            layer.ops = strongly_entangling_layer(layer_params, n);
            const NoisyCircuit noisy_layer = insert_noise(layer, device);
            for (const NoisyOp &op : noisy_layer.ops) {
                apply_noisy_op_inplace(rho, op);
            }
            for (const GateOp &op : layer.ops) {
                apply_gate_inplace(psi, op);
            }

            const ProbDist dist = readout_probabilities(noisy_layer, rho);
            const ProbDist ref = probabilities(psi);
            const std::size_t slot = trial * depths + (d - 1);
            chi2u[slot] = chi2_to_uniform(dist);
            chi2r[slot] = chi2_between(dist, ref);
            if (trial == 0 &&
                std::find(config.checkpoints.begin(),
                          config.checkpoints.end(),
                          static_cast<std::uint32_t>(d)) !=
                    config.checkpoints.end()) {
                trial0_dists[d] = dist;
            }
        }
    });

    DegradeResult result;
    result.rows.resize(depths);
    std::vector<double> col(config.trials);
    for (std::size_t d = 0; d < depths; ++d) {
        DegradeRow &row = result.rows[d];
        row.depth = static_cast<std::uint32_t>(d + 1);
        for (std::size_t t = 0; t < config.trials; ++t) {
            col[t] = chi2u[t * depths + d];
            row.chi2_uniform_mean += col[t];
        }
        row.chi2_uniform_mean /= static_cast<double>(config.trials);
        row.chi2_uniform_std = column_std(col, row.chi2_uniform_mean);
        for (std::size_t t = 0; t < config.trials; ++t) {
            col[t] = chi2r[t * depths + d];
            row.chi2_ref_mean += col[t];
        }
        row.chi2_ref_mean /= static_cast<double>(config.trials);
        row.chi2_ref_std = column_std(col, row.chi2_ref_mean);
    }

    // Fit over the pre-floor region: depths before the curve sinks below
    // 1e-9 of its initial value (converged tail would flatten the line).
    DecaySeries series;
    const double initial = result.rows.front().chi2_uniform_mean;
    for (const DegradeRow &row : result.rows) {
        if (!(row.chi2_uniform_mean > 0.0) ||
            row.chi2_uniform_mean < initial * 1e-9) {
            break;
        }
        series.layer_index.push_back(row.depth);
        series.value.push_back(row.chi2_uniform_mean);
    }
    if (series.value.size() >= 5) {
        const auto [rate, r2] = fit_exponential_decay(series);
        result.fitted_rate = rate;
        result.fit_r2 = r2;
    }

    for (std::size_t d = 0; d <= depths; ++d) {
        if (trial0_dists[d].has_value()) {
            result.checkpoint_dists.emplace(static_cast<std::uint32_t>(d),
                                            std::move(*trial0_dists[d]));
        }
    }
    return result;
}

CsvTable degrade_csv(const DegradeResult &result) {
    CsvTable table;
    table.header = {"depth",         "chi2_uniform_mean", "chi2_uniform_std",
                    "chi2_ref_mean", "chi2_ref_std",      "fitted_rate",
                    "fit_r2"};
    for (const DegradeRow &row : result.rows) {
        table.rows.push_back({std::to_string(row.depth),
                              csv_double(row.chi2_uniform_mean),
                              csv_double(row.chi2_uniform_std),
                              csv_double(row.chi2_ref_mean),
                              csv_double(row.chi2_ref_std),
                              csv_double(result.fitted_rate),
                              csv_double(result.fit_r2)});
    }
    return table;
}

std::vector<double> distribution_to_image(const ProbDist &dist) {
    if (dist.probs.size() < 196) {
        throw ShapeError("distribution is too small for a 14x14 image");
    }
    std::vector<double> img(dist.probs.begin(), dist.probs.begin() + 196);
    const double peak = *std::max_element(img.begin(), img.end());
    if (peak > 0.0) {
        for (double &p : img) {
            p /= peak;
        }
    }
    return img;
}

PrepResult run_prep(std::span<const double> amplitudes,
                    const std::vector<DeviceNoiseModel> &devices) {
    const Circuit prep = synthesize_prep(amplitudes);

    PrepResult result;
    result.ideal.n_qubits = prep.n_qubits;
    result.ideal.probs.resize(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        result.ideal.probs[i] = amplitudes[i] * amplitudes[i];
    }

    result.noisy.resize(devices.size());
    parallel_for(devices.size(), [&](std::size_t i) {
        const NoisyCircuit noisy = insert_noise(prep, devices[i]);
        const DensityMatrix rho = run_noisy(noisy);
        result.noisy[i] = {devices[i].name,
                           readout_probabilities(noisy, rho)};
    });
    return result;
}

double evaluate_accuracy(const QnnModel &model,
                         const std::vector<EncodedSample> &samples,
                         const DeviceNoiseModel *noise,
                         std::optional<std::uint64_t> shots,
                         std::uint64_t seed,
                         std::optional<std::size_t> max_samples) {
    if (samples.empty()) {
        throw ArgumentError("evaluation set is empty");
    }
    const std::size_t count =
        std::min(samples.size(), max_samples.value_or(samples.size()));
    std::vector<std::vector<double>> batch;
    batch.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        batch.push_back(samples[i].amplitudes);
    }
    const std::vector<int> predicted =
        predict(batch, model, noise, shots, seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < count; ++i) {
        hits += predicted[i] == samples[i].label ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(count);
}

std::vector<EvalCell>
run_eval_grid(const std::vector<EvalModel> &models,
              const std::vector<EvalDevice> &devices,
              const std::map<Split, std::vector<EncodedSample>> &test_sets,
              const EvalConfig &config) {
    if (models.empty() || devices.empty()) {
        throw ArgumentError("evaluation grid needs at least one model and "
                            "one device");
    }
    for (const EvalModel &m : models) {
        if (!test_sets.contains(m.split)) {
            throw ArgumentError(std::string("no test set for split ") +
                                split_name(m.split));
        }
        for (const EvalDevice &d : devices) {
            if (d.device != nullptr &&
                d.device->n_qubits < m.model.n_qubits) {
                throw CapacityError("model \"" + m.name + "\" needs " +
                                    std::to_string(m.model.n_qubits) +
                                    " qubits, device \"" + d.name +
                                    "\" has " +
                                    std::to_string(d.device->n_qubits));
            }
        }
    }

    std::vector<EvalCell> cells(models.size() * devices.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const EvalModel &m = models[i / devices.size()];
        const EvalDevice &d = devices[i % devices.size()];
        EvalCell &cell = cells[i];
        cell.model_name = m.name;
        cell.device_name = d.name;
        cell.split = split_name(m.split);
        cell.layers = m.layers;
        cell.accuracy = evaluate_accuracy(
            m.model, test_sets.at(m.split), d.device, config.shots,
            mix64(config.seed, 0xE7A1 + i), config.max_samples);
    });
    return cells;
}

CsvTable accuracy_csv(const std::vector<EvalCell> &cells) {
    CsvTable table;
    table.header = {"model", "device", "split", "layers", "accuracy"};
    for (const EvalCell &cell : cells) {
        table.rows.push_back({cell.model_name, cell.device_name, cell.split,
                              std::to_string(cell.layers),
                              csv_double(cell.accuracy)});
    }
    return table;
}

} // namespace qnnlab
