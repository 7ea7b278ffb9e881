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
#include "qnnlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <zlib.h>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(const std::vector<std::uint8_t> &b, std::size_t pos) {
    if (pos + 4 > b.size()) {
        throw SchemaError("IDX header truncated");
    }
    return (std::uint32_t{b[pos]} << 24) | (std::uint32_t{b[pos + 1]} << 16) |
           (std::uint32_t{b[pos + 2]} << 8) | std::uint32_t{b[pos + 3]};
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t> &in) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {
        throw SchemaError("cannot initialize gzip decoder");
    }
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    zs.next_in = const_cast<Bytef *>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw SchemaError("corrupt gzip stream");
        }
        out.insert(out.end(), buf.data(),
                   buf.data() + (buf.size() - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

} // namespace

Split parse_split(const std::string &tag) {
    if (tag == "0-1") return Split::ZeroOne;
    if (tag == "0-3") return Split::ZeroThree;
    if (tag == "0-9") return Split::ZeroNine;
    throw ArgumentError("unknown split \"" + tag + "\" (expected 0-1, 0-3 "
                        "or 0-9)");
}

const char *split_name(Split split) {
    switch (split) {
    case Split::ZeroOne:
        return "0-1";
    case Split::ZeroThree:
        return "0-3";
    case Split::ZeroNine:
        return "0-9";
    }
    return "?";
}

int split_max_digit(Split split) {
    switch (split) {
    case Split::ZeroOne:
        return 1;
    case Split::ZeroThree:
        return 3;
    case Split::ZeroNine:
        return 9;
    }
    return 9;
}

std::size_t split_class_count(Split split) {
    return static_cast<std::size_t>(split_max_digit(split)) + 1;
}

std::vector<RawImage> parse_idx(const std::vector<std::uint8_t> &image_bytes,
                                const std::vector<std::uint8_t> &label_bytes) {
    if (read_be32(image_bytes, 0) != kImageMagic) {
        throw SchemaError("bad IDX image magic");
    }
    if (read_be32(label_bytes, 0) != kLabelMagic) {
        throw SchemaError("bad IDX label magic");
    }
    const std::uint32_t n_images = read_be32(image_bytes, 4);
    const std::uint32_t rows = read_be32(image_bytes, 8);
    const std::uint32_t cols = read_be32(image_bytes, 12);
    const std::uint32_t n_labels = read_be32(label_bytes, 4);
    if (rows != 28 || cols != 28) {
        throw SchemaError("expected 28x28 images");
    }
    if (n_images != n_labels) {
        throw SchemaError("image/label counts differ (" +
                          std::to_string(n_images) + " vs " +
                          std::to_string(n_labels) + ")");
    }
    if (image_bytes.size() < 16 + std::size_t{784} * n_images ||
        label_bytes.size() < 8 + std::size_t{n_labels}) {
        throw SchemaError("IDX payload truncated");
    }

    std::vector<RawImage> samples(n_images);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        RawImage &s = samples[i];
        const std::uint8_t *px = image_bytes.data() + 16 + std::size_t{784} * i;
        for (std::size_t k = 0; k < 784; ++k) {
            s.pixels[k] = static_cast<double>(px[k]) / 255.0;
        }
        s.label = label_bytes[8 + i];
        if (s.label > 9) {
            throw SchemaError("label byte out of range");
        }
    }
    return samples;
}

std::vector<std::uint8_t> read_idx_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes(
        (std::istreambuf_iterator<char>(in)),
        std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return gunzip(bytes);
    }
    return bytes;
}

ImageSample max_pool_2x2(const RawImage &image) {
    ImageSample out;
    out.label = image.label;
    for (std::size_t r = 0; r < 14; ++r) {
        for (std::size_t c = 0; c < 14; ++c) {
            const std::size_t r0 = 2 * r, c0 = 2 * c;
            double m = image.pixels[r0 * 28 + c0];
            m = std::max(m, image.pixels[r0 * 28 + c0 + 1]);
            m = std::max(m, image.pixels[(r0 + 1) * 28 + c0]);
            m = std::max(m, image.pixels[(r0 + 1) * 28 + c0 + 1]);
            out.pixels[r * 14 + c] = m;
        }
    }
    return out;
}

EncodedSample encode_amplitudes(const ImageSample &image) {
    double norm_sq = 0.0;
    for (double p : image.pixels) {
        norm_sq += p * p;
    }
    if (!(norm_sq > 0.0)) {
        throw DomainError("cannot amplitude-encode an all-zero image");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);

    EncodedSample out;
    out.label = image.label;
    out.amplitudes.assign(256, 0.0);
    for (std::size_t k = 0; k < 196; ++k) {
        out.amplitudes[k] = image.pixels[k] * inv_norm;
    }
    return out;
}

namespace {
template <typename Sample>
std::vector<Sample> filter_impl(std::vector<Sample> samples, Split split) {
    const int max_digit = split_max_digit(split);
    std::erase_if(samples,
                  [max_digit](const Sample &s) { return s.label > max_digit; });
    return samples;
}
} // namespace

std::vector<EncodedSample> filter_split(std::vector<EncodedSample> samples,
                                        Split split) {
    return filter_impl(std::move(samples), split);
}

std::vector<RawImage> filter_split(std::vector<RawImage> samples,
                                   Split split) {
    return filter_impl(std::move(samples), split);
}

std::vector<RawImage> load_mnist_dir(const std::filesystem::path &dir,
                                     bool train) {
    const std::string prefix = train ? "train" : "t10k";
    const auto find = [&](const std::string &stem) {
        for (const char *suffix : {"", ".gz"}) {
            const std::filesystem::path p = dir / (stem + suffix);
            if (std::filesystem::exists(p)) {
                return p;
            }
        }
        throw SchemaError("missing MNIST file " + (dir / stem).string() +
                          "[.gz]");
    };
    return parse_idx(read_idx_file(find(prefix + "-images-idx3-ubyte")),
                     read_idx_file(find(prefix + "-labels-idx1-ubyte")));
}

std::vector<EncodedSample> load_encoded(const std::filesystem::path &dir,
                                        Split split, bool train) {
    std::vector<RawImage> raw =
        filter_split(load_mnist_dir(dir, train), split);
    std::vector<EncodedSample> out;
    out.reserve(raw.size());
    for (const RawImage &img : raw) {
        out.push_back(encode_amplitudes(max_pool_2x2(img)));
    }
    return out;
}

} // namespace qnnlab
