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
#include <span>
#include <vector>

#include "qnnlab/state.hpp"

namespace qnnlab {

/**
 * Rotation angles of the state-preparation recursion: level k holds the
 * 2^k uniformly controlled RY angles that split each parent amplitude
 * block into its halves.
 */
struct AngleTree {
    std::vector<std::vector<double>> levels;
};

/**
 * Angles for preparing a non-negative real unit vector (length 2^n).
 * Level-k angle j is 2*arcsin(r_right / r_parent) over the norms of the
 * corresponding amplitude blocks; zero-norm parents yield angle 0, which
 * keeps fully zero-padded subtrees finite.
 */
AngleTree compute_angle_tree(std::span<const double> amplitudes);

/**
 * Gray-code decomposition of a uniformly controlled RY: 2^k RY gates on
 * `target` interleaved with 2^k CNOTs whose control follows the bit that
 * changes between consecutive gray codes (the last CNOT closes the cycle
 * back to code 0). k = 0 degenerates to a single RY.
 */
std::vector<GateOp> multiplexed_ry(std::span<const double> angles,
                                   std::span<const std::uint32_t> controls,
                                   std::uint32_t target);

/// RY+CNOT circuit preparing `amplitudes` from |0...0>.
Circuit synthesize_prep(std::span<const double> amplitudes);

} // namespace qnnlab
