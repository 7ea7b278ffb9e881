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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <vector>

#include "qnnlab/dataset.hpp"
#include "qnnlab/errors.hpp"

using namespace qnnlab;

namespace {

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t value) {
    out.push_back(static_cast<std::uint8_t>(value >> 24));
    out.push_back(static_cast<std::uint8_t>(value >> 16));
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value));
}

std::vector<std::uint8_t> idx_images(const std::vector<std::uint8_t> &pixels,
                                     std::uint32_t count) {
    std::vector<std::uint8_t> out;
    put_u32(out, 0x803);
    put_u32(out, count);
    put_u32(out, 28);
    put_u32(out, 28);
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t> &labels) {
    std::vector<std::uint8_t> out;
    put_u32(out, 0x801);
    put_u32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

} // namespace

TEST_CASE("parse_idx reads a handmade file pair") {
    std::vector<std::uint8_t> pixels(2 * 784, 0);
    pixels[0] = 255;            // image 0, pixel (0,0)
    pixels[784 + 29] = 51;      // image 1, pixel (1,1)
    const auto images = idx_images(pixels, 2);
    const auto labels = idx_labels({7, 2});
    const std::vector<RawImage> parsed = parse_idx(images, labels);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].label == 7);
    CHECK(parsed[1].label == 2);
    CHECK(parsed[0].pixels[0] == 1.0);
    CHECK(std::abs(parsed[1].pixels[29] - 51.0 / 255.0) < 1e-15);
    CHECK(parsed[1].pixels[0] == 0.0);
}

TEST_CASE("parse_idx rejects malformed headers") {
    const auto labels = idx_labels({1});
    std::vector<std::uint8_t> bad_magic =
        idx_images(std::vector<std::uint8_t>(784, 0), 1);
    bad_magic[3] = 0x01;
    CHECK_THROWS_AS(parse_idx(bad_magic, labels), SchemaError);

    // Image/label count mismatch.
    const auto one = idx_images(std::vector<std::uint8_t>(784, 0), 1);
    CHECK_THROWS_AS(parse_idx(one, idx_labels({1, 2})), SchemaError);

    // Truncated pixel payload.
    auto truncated = idx_images(std::vector<std::uint8_t>(700, 0), 1);
    CHECK_THROWS_AS(parse_idx(truncated, labels), SchemaError);
}

TEST_CASE("max pooling keeps block maxima") {
    RawImage raw{};
    raw.label = 4;
    // Block (0,0): pixels (0,0),(0,1),(1,0),(1,1).
    raw.pixels[0] = 0.1;
    raw.pixels[1] = 0.9;
    raw.pixels[28] = 0.3;
    raw.pixels[29] = 0.2;
    // Block (13,13): bottom-right corner.
    raw.pixels[27 * 28 + 27] = 0.7;
    const ImageSample pooled = max_pool_2x2(raw);
    CHECK(pooled.label == 4);
    CHECK(pooled.pixels[0] == 0.9);
    CHECK(pooled.pixels[13 * 14 + 13] == 0.7);
    CHECK(pooled.pixels[1] == 0.0);
}

TEST_CASE("amplitude encoding is a zero-padded unit vector") {
    ImageSample image{};
    image.label = 1;
    image.pixels.fill(0.0);
    image.pixels[0] = 3.0 / 5.0;
    image.pixels[195] = 4.0 / 5.0;
    const EncodedSample enc = encode_amplitudes(image);
    REQUIRE(enc.amplitudes.size() == 256);
    CHECK(std::abs(enc.amplitudes[0] - 0.6) < 1e-15);
    CHECK(std::abs(enc.amplitudes[195] - 0.8) < 1e-15);
    for (std::size_t i = 196; i < 256; ++i) {
        CHECK(enc.amplitudes[i] == 0.0);
    }
    const double norm_sq = std::inner_product(
        enc.amplitudes.begin(), enc.amplitudes.end(),
        enc.amplitudes.begin(), 0.0);
    CHECK(std::abs(norm_sq - 1.0) < 1e-12);

    // An all-black image has no encodable direction.
    ImageSample black{};
    black.pixels.fill(0.0);
    CHECK_THROWS_AS(encode_amplitudes(black), DomainError);
}

TEST_CASE("split parsing and filtering") {
    CHECK(parse_split("0-1") == Split::ZeroOne);
    CHECK(parse_split("0-3") == Split::ZeroThree);
    CHECK(parse_split("0-9") == Split::ZeroNine);
    CHECK_THROWS_AS(parse_split("0-5"), ArgumentError);
    CHECK(split_class_count(Split::ZeroThree) == 4);
    CHECK(split_max_digit(Split::ZeroNine) == 9);

    std::vector<EncodedSample> samples;
    for (int label = 0; label < 10; ++label) {
        EncodedSample s;
        s.label = label;
        s.amplitudes.assign(256, 0.0);
        s.amplitudes[0] = 1.0;
        samples.push_back(std::move(s));
    }
    const auto binary = filter_split(samples, Split::ZeroOne);
    REQUIRE(binary.size() == 2);
    CHECK(binary[0].label == 0);
    CHECK(binary[1].label == 1);
    CHECK(filter_split(samples, Split::ZeroThree).size() == 4);
    CHECK(filter_split(samples, Split::ZeroNine).size() == 10);
}

TEST_CASE("the bundled MNIST archives load end to end") {
    const std::filesystem::path dir =
        std::filesystem::path(QNNLAB_SOURCE_DIR) / "data" / "mnist";
    const std::vector<RawImage> test_set = load_mnist_dir(dir, false);
    REQUIRE(test_set.size() == 2000);
    for (const RawImage &img : test_set) {
        CHECK(img.label >= 0);
        CHECK(img.label <= 9);
    }
    // Known label frequencies of the bundled test subset.
    const std::size_t zeros = static_cast<std::size_t>(std::count_if(
        test_set.begin(), test_set.end(),
        [](const RawImage &img) { return img.label == 0; }));
    CHECK(zeros == 200);

    const std::vector<EncodedSample> encoded =
        load_encoded(dir, Split::ZeroOne, false);
    CHECK(encoded.size() == 200 + 225);
    for (std::size_t i = 0; i < 5; ++i) {
        const double norm_sq = std::inner_product(
            encoded[i].amplitudes.begin(), encoded[i].amplitudes.end(),
            encoded[i].amplitudes.begin(), 0.0);
        CHECK(std::abs(norm_sq - 1.0) < 1e-12);
    }
}

TEST_CASE("read_idx_file gunzips transparently") {
    const std::filesystem::path dir =
        std::filesystem::path(QNNLAB_SOURCE_DIR) / "data" / "mnist";
    const std::vector<std::uint8_t> bytes =
        read_idx_file(dir / "t10k-labels-idx1-ubyte.gz");
    REQUIRE(bytes.size() == 8 + 2000);
    CHECK(bytes[2] == 0x08);
    CHECK(bytes[3] == 0x01);
    CHECK_THROWS_AS(read_idx_file(dir / "no-such-file"), SchemaError);
}
