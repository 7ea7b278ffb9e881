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
#include "qnnlab/rng.hpp"

namespace qnnlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t finalize(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}
} // namespace

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return finalize(a + kGolden * (b + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(stream == 0 ? seed : mix64(seed, stream)) {}

std::uint64_t Rng::next_u64() { return finalize(key_ + kGolden * ++counter_); }

double Rng::uniform() {
    // 53 mantissa bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
    return bound == 0 ? 0 : next_u64() % bound;
}

Rng Rng::derive(std::uint64_t stream) const { return Rng(key_, stream + 1); }

} // namespace qnnlab
