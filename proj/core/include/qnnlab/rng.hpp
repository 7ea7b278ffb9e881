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

namespace qnnlab {

/**
 * Counter-based pseudo-random generator (splitmix64 finalizer over a
 * key/counter pair). Output is identical on every platform, and derived
 * streams are independent of scheduling, so parallel workers can each own
 * a stream derived from the master seed.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound).
    std::uint64_t uniform_index(std::uint64_t bound);

    /// New generator with an independent stream derived from this key.
    Rng derive(std::uint64_t stream) const;

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Stateless 64-bit mix, used for seed derivation chains.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

} // namespace qnnlab
