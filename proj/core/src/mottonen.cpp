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
#include "qnnlab/mottonen.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

std::uint32_t log2_exact(std::size_t size) {
    if (size < 2 || (size & (size - 1)) != 0) {
        throw ShapeError("amplitude vector length must be a power of two "
                         ">= 2, got " +
                         std::to_string(size));
    }
    return static_cast<std::uint32_t>(std::countr_zero(size));
}

} // namespace

AngleTree compute_angle_tree(std::span<const double> amplitudes) {
    const std::uint32_t n = log2_exact(amplitudes.size());
    double norm_sq = 0.0;
    for (double a : amplitudes) {
        if (a < 0.0 || !std::isfinite(a)) {
            throw DomainError("amplitudes must be non-negative reals");
        }
        norm_sq += a * a;
    }
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
        throw NormalizationError("amplitude vector is not unit norm");
    }

    // Block norms bottom-up: level n holds the amplitudes themselves,
    // level k holds the 2^k parent-block norms.
    std::vector<std::vector<double>> norms(n + 1);
    norms[n].assign(amplitudes.begin(), amplitudes.end());
    for (std::uint32_t k = n; k > 0; --k) {
        norms[k - 1].resize(std::size_t{1} << (k - 1));
        for (std::size_t j = 0; j < norms[k - 1].size(); ++j) {
            norms[k - 1][j] = std::hypot(norms[k][2 * j], norms[k][2 * j + 1]);
        }
    }

    AngleTree tree;
    tree.levels.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        tree.levels[k].resize(std::size_t{1} << k);
        for (std::size_t j = 0; j < tree.levels[k].size(); ++j) {
            const double parent = norms[k][j];
            const double right = norms[k + 1][2 * j + 1];
            tree.levels[k][j] =
                parent > 0.0
                    ? 2.0 * std::asin(std::min(1.0, right / parent))
                    : 0.0;
        }
    }
    return tree;
}

std::vector<GateOp> multiplexed_ry(std::span<const double> angles,
                                   std::span<const std::uint32_t> controls,
                                   std::uint32_t target) {
    const std::size_t k = controls.size();
    const std::size_t count = std::size_t{1} << k;
    if (angles.size() != count) {
        throw ShapeError("multiplexed RY needs 2^k angles for k controls");
    }
    if (k == 0) {
        return {ry(target, angles[0])};
    }

    // Rotated angles: theta'_i = 2^-k * sum_j (-1)^(b_j . g_i) theta_j.
    std::vector<double> rotated(count, 0.0);
    const double scale = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t gi = gray(static_cast<std::uint32_t>(i));
        double acc = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const int sign =
                std::popcount(static_cast<std::uint32_t>(j) & gi) % 2 == 0
                    ? 1
                    : -1;
            acc += sign * angles[j];
        }
        rotated[i] = scale * acc;
    }

    std::vector<GateOp> ops;
    ops.reserve(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
        ops.push_back(ry(target, rotated[i]));
        // Control = the bit that flips between consecutive gray codes;
        // the final CNOT (i = 2^k - 1) closes the cycle back to code 0.
        const std::uint32_t diff =
            gray(static_cast<std::uint32_t>(i)) ^
            gray(static_cast<std::uint32_t>((i + 1) % count));
        const auto bitpos =
            static_cast<std::uint32_t>(std::countr_zero(diff));
        // Bit b of the control value belongs to controls[k - 1 - b]
        // (qubit 0 carries the most significant control bit).
        ops.push_back(cnot(controls[k - 1 - bitpos], target));
    }
    return ops;
}

Circuit synthesize_prep(std::span<const double> amplitudes) {
    const std::uint32_t n = log2_exact(amplitudes.size());
    const AngleTree tree = compute_angle_tree(amplitudes);

    Circuit circuit;
    circuit.n_qubits = n;
    std::vector<std::uint32_t> controls;
    for (std::uint32_t k = 0; k < n; ++k) {
        for (GateOp &op : multiplexed_ry(tree.levels[k], controls, k)) {
            circuit.push(std::move(op));
        }
        controls.push_back(k);
    }
    return circuit;
}

} // namespace qnnlab
