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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnnlab/dataset.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/harness.hpp"
#include "qnnlab/qnn.hpp"
#include "qnnlab/report.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/training.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qnnlab;

std::string joined_command_line(int argc, char **argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) {
            line += ' ';
        }
        line += argv[i];
    }
    return line;
}

/// Wallclock helper for the manifest.
class RunClock {
  public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

void finish_manifest(RunManifest manifest, const RunClock &clock,
                     const fs::path &out_dir, const std::string &stem) {
    manifest.wallclock_ms = clock.elapsed_ms();
    write_manifest_atomic(manifest, out_dir / (stem + ".manifest.json"));
}

void record_output(RunManifest &manifest, const fs::path &out_dir,
                   const fs::path &file) {
    manifest.outputs[fs::relative(file, out_dir).string()] =
        crc32_of_file(file);
}

std::vector<std::uint32_t> parse_checkpoints(const std::string &arg) {
    if (arg.empty()) {
        return {};
    }
    if (arg == "coarse") {
        return {1, 3, 6, 10, 15};
    }
    std::vector<std::uint32_t> out;
    std::size_t pos = 0;
    while (pos < arg.size()) {
        std::size_t comma = arg.find(',', pos);
        if (comma == std::string::npos) {
            comma = arg.size();
        }
        const std::string tok = arg.substr(pos, comma - pos);
        try {
            out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        } catch (const std::exception &) {
            throw ArgumentError("bad checkpoint depth \"" + tok + "\"");
        }
        pos = comma + 1;
    }
    return out;
}

EncodedSample encoded_test_image(const fs::path &mnist_dir,
                                 std::size_t image_index) {
    const std::vector<RawImage> raw = load_mnist_dir(mnist_dir, false);
    if (image_index >= raw.size()) {
        throw BoundsError("image index " + std::to_string(image_index) +
                          " out of range (test set holds " +
                          std::to_string(raw.size()) + " images)");
    }
    return encode_amplitudes(max_pool_2x2(raw[image_index]));
}

Split split_for_model(const QnnModel &model) {
    switch (model.class_labels.size()) {
    case 2:
        return Split::ZeroOne;
    case 4:
        return Split::ZeroThree;
    case 10:
        return Split::ZeroNine;
    default:
        throw SchemaError("model has " +
                          std::to_string(model.class_labels.size()) +
                          " classes; expected 2, 4 or 10");
    }
}

struct CommonArgs {
    std::string mnist_dir = "data/mnist";
    std::string out_dir = "runs";
    std::uint64_t seed = 0;
};

int cmd_degrade(const CommonArgs &common, const std::string &device_file,
                std::uint32_t depth_max, std::size_t trials,
                const std::string &input_tag, std::size_t image_index,
                const std::string &checkpoints_arg,
                const std::string &command_line) {
    const RunClock clock;
    const DeviceNoiseModel device = load_device_model(device_file);

    DegradeConfig config;
    config.depth_max = depth_max;
    config.trials = trials;
    config.input = parse_degrade_input(input_tag);
    config.seed = common.seed;
    config.checkpoints = parse_checkpoints(checkpoints_arg);
    if (config.input == DegradeInput::Image) {
        config.image =
            encoded_test_image(common.mnist_dir, image_index).amplitudes;
    }

    const DegradeResult result = run_degrade(device, config);

    const fs::path out_dir(common.out_dir);
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command_line = command_line;
    manifest.master_seed = common.seed;
    manifest.fixtures[fs::path(device_file).filename().string()] =
        crc32_of_file(device_file);
    nlohmann::json cfg;
    cfg["device"] = device.name;
    cfg["depth_max"] = depth_max;
    cfg["trials"] = trials;
    cfg["input"] = degrade_input_name(config.input);
    cfg["image_index"] = image_index;
    cfg["checkpoints"] = config.checkpoints;
    manifest.config_json = cfg.dump();

    const fs::path csv_path = out_dir / "degrade.csv";
    write_csv(csv_path, degrade_csv(result));
    record_output(manifest, out_dir, csv_path);
    for (const auto &[depth, dist] : result.checkpoint_dists) {
        const fs::path img_path =
            out_dir / ("degrade-depth" + std::to_string(depth) + ".pgm");
        write_pgm(img_path, 14, 14, distribution_to_image(dist));
        record_output(manifest, out_dir, img_path);
    }
    finish_manifest(std::move(manifest), clock, out_dir, "degrade");
    std::cout << "degrade: " << result.rows.size() << " depths, fitted rate "
              << result.fitted_rate << " (r2 " << result.fit_r2 << ")\n";
    return 0;
}

int cmd_prep(const CommonArgs &common,
             const std::vector<std::string> &device_files,
             std::size_t image_index, const std::string &command_line) {
    const RunClock clock;
    std::vector<DeviceNoiseModel> devices;
    devices.reserve(device_files.size());
    for (const std::string &f : device_files) {
        devices.push_back(load_device_model(f));
    }
    const EncodedSample sample =
        encoded_test_image(common.mnist_dir, image_index);
    const PrepResult result = run_prep(sample.amplitudes, devices);

    const fs::path out_dir(common.out_dir);
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command_line = command_line;
    manifest.master_seed = common.seed;
    for (const std::string &f : device_files) {
        manifest.fixtures[fs::path(f).filename().string()] = crc32_of_file(f);
    }
    nlohmann::json cfg;
    cfg["image_index"] = image_index;
    cfg["devices"] = nlohmann::json::array();
    for (const DeviceNoiseModel &d : devices) {
        cfg["devices"].push_back(d.name);
    }
    manifest.config_json = cfg.dump();

    const fs::path ideal_path = out_dir / "prep-ideal.pgm";
    write_pgm(ideal_path, 14, 14, distribution_to_image(result.ideal));
    record_output(manifest, out_dir, ideal_path);
    for (const auto &[name, dist] : result.noisy) {
        const fs::path p = out_dir / ("prep-" + name + ".pgm");
        write_pgm(p, 14, 14, distribution_to_image(dist));
        record_output(manifest, out_dir, p);
    }
    finish_manifest(std::move(manifest), clock, out_dir, "prep");
    std::cout << "prep: wrote " << (1 + result.noisy.size()) << " images\n";
    return 0;
}

int cmd_train(const CommonArgs &common, const std::string &split_tag,
              const std::vector<std::size_t> &layer_counts,
              std::size_t epochs, double lr, std::size_t batch,
              std::optional<std::size_t> max_train_samples,
              const std::string &command_line) {
    const RunClock clock;
    const Split split = parse_split(split_tag);
    const std::vector<EncodedSample> train_set =
        load_encoded(common.mnist_dir, split, true);

    const fs::path out_dir(common.out_dir);
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command_line = command_line;
    manifest.master_seed = common.seed;
    nlohmann::json cfg;
    cfg["split"] = split_tag;
    cfg["layers"] = layer_counts;
    cfg["epochs"] = epochs;
    cfg["learning_rate"] = lr;
    cfg["batch_size"] = batch;
    if (max_train_samples.has_value()) {
        cfg["max_train_samples"] = *max_train_samples;
    }
    manifest.config_json = cfg.dump();

    for (std::size_t layers : layer_counts) {
        TrainConfig config;
        config.learning_rate = lr;
        config.batch_size = batch;
        config.epochs = epochs;
        config.seed = common.seed;
        config.layers = layers;
        config.split = split;
        config.max_train_samples = max_train_samples;
        const TrainResult result = train(train_set, config);

        const std::string stem =
            "model-" + split_tag + "-L" + std::to_string(layers);
        const fs::path model_path = out_dir / (stem + ".json");
        const fs::path log_path = out_dir / (stem + "-log.csv");
        save_model(result.model, model_path);
        result.log.write_csv(log_path);
        record_output(manifest, out_dir, model_path);
        record_output(manifest, out_dir, log_path);
        std::cout << "train: " << stem << " (" << result.log.rows.size()
                  << " steps, final loss "
                  << (result.log.rows.empty()
                          ? 0.0
                          : result.log.rows.back().batch_loss)
                  << ")\n";
    }
    finish_manifest(std::move(manifest), clock, out_dir, "train");
    return 0;
}

int cmd_eval(const CommonArgs &common,
             const std::vector<std::string> &model_files,
             const std::vector<std::string> &device_files,
             std::optional<std::uint64_t> shots,
             std::optional<std::size_t> max_samples,
             const std::string &command_line) {
    const RunClock clock;
    std::vector<EvalModel> models;
    for (const std::string &f : model_files) {
        EvalModel m;
        m.model = load_model(f);
        m.split = split_for_model(m.model);
        m.layers = m.model.layers.n_layers;
        m.name = fs::path(f).stem().string();
        models.push_back(std::move(m));
    }
    std::vector<DeviceNoiseModel> loaded;
    loaded.reserve(device_files.size());
    for (const std::string &f : device_files) {
        loaded.push_back(load_device_model(f));
    }
    std::vector<EvalDevice> devices;
    devices.push_back({"base", nullptr});
    for (const DeviceNoiseModel &d : loaded) {
        devices.push_back({d.name, &d});
    }

    std::map<Split, std::vector<EncodedSample>> test_sets;
    for (const EvalModel &m : models) {
        if (!test_sets.contains(m.split)) {
            test_sets[m.split] =
                load_encoded(common.mnist_dir, m.split, false);
        }
    }

    EvalConfig config;
    config.shots = shots;
    config.seed = common.seed;
    config.max_samples = max_samples;
    const std::vector<EvalCell> cells =
        run_eval_grid(models, devices, test_sets, config);

    const fs::path out_dir(common.out_dir);
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command_line = command_line;
    manifest.master_seed = common.seed;
    for (const std::string &f : device_files) {
        manifest.fixtures[fs::path(f).filename().string()] = crc32_of_file(f);
    }
    for (const std::string &f : model_files) {
        manifest.fixtures[fs::path(f).filename().string()] = crc32_of_file(f);
    }
    nlohmann::json cfg;
    cfg["models"] = model_files;
    cfg["devices"] = device_files;
    if (shots.has_value()) {
        cfg["shots"] = *shots;
    }
    if (max_samples.has_value()) {
        cfg["max_samples"] = *max_samples;
    }
    manifest.config_json = cfg.dump();

    const fs::path csv_path = out_dir / "accuracy.csv";
    write_csv(csv_path, accuracy_csv(cells));
    record_output(manifest, out_dir, csv_path);
    finish_manifest(std::move(manifest), clock, out_dir, "eval");
    for (const EvalCell &cell : cells) {
        std::cout << "eval: " << cell.model_name << " @ " << cell.device_name
                  << " -> " << cell.accuracy << "\n";
    }
    return 0;
}

int cmd_report(const std::string &run_dir, const std::string &out_dir) {
    const ConsolidatedReport report = consolidate_run_dir(run_dir);
    const std::vector<fs::path> written =
        write_consolidated(report, out_dir);
    std::cout << "report: " << report.manifests_checked << " manifests, "
              << report.files_verified << " files verified, "
              << written.size() << " outputs\n";
    for (const std::string &w : report.warnings) {
        std::cout << "warning: " << w << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noise-aware quantum circuit simulator and experiment "
                 "harness"};
    app.require_subcommand(1);
    const std::string command_line = joined_command_line(argc, argv);

    CommonArgs common;

    auto *degrade = app.add_subcommand(
        "degrade", "State degradation vs. circuit depth under noise");
    std::string device_file;
    std::uint32_t depth_max = 60;
    std::size_t trials = 10;
    std::string input_tag = "image";
    std::size_t image_index = 0;
    std::string checkpoints_arg;
    degrade->add_option("--device", device_file, "Device noise JSON file")
        ->required();
    degrade->add_option("--mnist", common.mnist_dir, "MNIST directory");
    degrade->add_option("--depth-max", depth_max, "Deepest layer count");
    degrade->add_option("--trials", trials, "Random-weight trials per depth");
    degrade->add_option("--input", input_tag,
                        "Initial state: image, basis or uniform");
    degrade->add_option("--image-index", image_index,
                        "Test-set image for --input image");
    degrade->add_option("--checkpoints", checkpoints_arg,
                        "Comma-separated depths to image, or 'coarse' "
                        "(1,3,6,10,15)");
    degrade->add_option("--seed", common.seed, "Master seed");
    degrade->add_option("--out", common.out_dir, "Output directory");

    auto *prep = app.add_subcommand(
        "prep", "Noisy amplitude preparation of one test image");
    std::vector<std::string> prep_devices;
    prep->add_option("--device", prep_devices, "Device noise JSON file(s)")
        ->required();
    prep->add_option("--mnist", common.mnist_dir, "MNIST directory");
    prep->add_option("--image-index", image_index, "Test-set image index");
    prep->add_option("--seed", common.seed, "Master seed");
    prep->add_option("--out", common.out_dir, "Output directory");

    auto *train_cmd = app.add_subcommand(
        "train", "Noise-free training of the variational classifier");
    std::string split_tag = "0-1";
    std::vector<std::size_t> layer_counts = {1};
    std::size_t epochs = 0;
    double lr = 0.01;
    std::size_t batch = 16;
    std::optional<std::size_t> max_train_samples;
    train_cmd->add_option("--mnist", common.mnist_dir, "MNIST directory");
    train_cmd->add_option("--split", split_tag, "Digit split: 0-1, 0-3, 0-9");
    train_cmd
        ->add_option("--layers", layer_counts,
                     "Entangling layer counts (one model per value)")
        ->delimiter(',');
    train_cmd->add_option("--epochs", epochs,
                          "Epochs (0 = split default 1/2/4)");
    train_cmd->add_option("--lr", lr, "Adam learning rate");
    train_cmd->add_option("--batch", batch, "Batch size");
    train_cmd->add_option("--max-train-samples", max_train_samples,
                          "Cap on training samples per epoch");
    train_cmd->add_option("--seed", common.seed, "Master seed");
    train_cmd->add_option("--out", common.out_dir, "Output directory");

    auto *eval_cmd = app.add_subcommand(
        "eval", "Accuracy grid of trained models across noise models");
    std::vector<std::string> model_files;
    std::vector<std::string> eval_devices;
    std::optional<std::uint64_t> shots;
    std::optional<std::size_t> max_samples;
    eval_cmd->add_option("--model", model_files, "Trained model JSON file(s)")
        ->required();
    eval_cmd->add_option("--device", eval_devices,
                         "Device noise JSON file(s); noise-free 'base' is "
                         "always included");
    eval_cmd->add_option("--mnist", common.mnist_dir, "MNIST directory");
    eval_cmd->add_option("--shots", shots,
                         "Sample expectations from this many shots");
    eval_cmd->add_option("--max-samples", max_samples,
                         "Cap on evaluated test samples");
    eval_cmd->add_option("--seed", common.seed, "Master seed");
    eval_cmd->add_option("--out", common.out_dir, "Output directory");

    auto *report_cmd = app.add_subcommand(
        "report", "Verify manifests and merge CSVs of previous runs");
    std::string run_dir;
    std::string report_out = "runs/report";
    report_cmd->add_option("--run-dir", run_dir, "Directory with prior runs")
        ->required();
    report_cmd->add_option("--out", report_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (degrade->parsed()) {
            return cmd_degrade(common, device_file, depth_max, trials,
                               input_tag, image_index, checkpoints_arg,
                               command_line);
        }
        if (prep->parsed()) {
            return cmd_prep(common, prep_devices, image_index, command_line);
        }
        if (train_cmd->parsed()) {
            return cmd_train(common, split_tag, layer_counts, epochs, lr,
                             batch, max_train_samples, command_line);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(common, model_files, eval_devices, shots,
                            max_samples, command_line);
        }
        if (report_cmd->parsed()) {
            return cmd_report(run_dir, report_out);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
