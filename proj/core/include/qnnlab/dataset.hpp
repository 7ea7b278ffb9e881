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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qnnlab {

/// Which digit classes a model is trained and evaluated on.
enum class Split { ZeroOne, ZeroThree, ZeroNine };

Split parse_split(const std::string &tag); // "0-1" | "0-3" | "0-9"
const char *split_name(Split split);
int split_max_digit(Split split);
std::size_t split_class_count(Split split);

/// Raw 28x28 image scaled to [0, 1], row-major.
struct RawImage {
    std::array<double, 784> pixels;
    int label = 0;
};

/// 2x2 max-pooled 14x14 image in [0, 1].
struct ImageSample {
    std::array<double, 196> pixels;
    int label = 0;
};

/// Amplitude-encoded sample: 196 pixels flattened row-major into the
/// first entries of a unit vector over the 256 basis states of 8 qubits;
/// entries 196..255 stay exactly 0.
struct EncodedSample {
    std::vector<double> amplitudes; // length 256
    int label = 0;
};

/// Parses a pair of IDX files (magic 0x803 images / 0x801 labels,
/// big-endian dims); pixel bytes map to [0, 1] by /255.
std::vector<RawImage> parse_idx(const std::vector<std::uint8_t> &image_bytes,
                                const std::vector<std::uint8_t> &label_bytes);

/// Reads a file, transparently gunzipping when it starts with the gzip
/// magic bytes.
std::vector<std::uint8_t> read_idx_file(const std::filesystem::path &path);

ImageSample max_pool_2x2(const RawImage &image);

EncodedSample encode_amplitudes(const ImageSample &image);

/// Keeps only the split's digits; labels are untouched (already
/// contiguous from 0).
std::vector<EncodedSample> filter_split(std::vector<EncodedSample> samples,
                                        Split split);
std::vector<RawImage> filter_split(std::vector<RawImage> samples,
                                   Split split);

/// Loads the canonical MNIST file pair from a directory (train or t10k
/// prefix), accepting both plain and .gz names.
std::vector<RawImage> load_mnist_dir(const std::filesystem::path &dir,
                                     bool train);

/// Full ingestion pipeline: load, pool, encode, filter.
std::vector<EncodedSample> load_encoded(const std::filesystem::path &dir,
                                        Split split, bool train);

} // namespace qnnlab
