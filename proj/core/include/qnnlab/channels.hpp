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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "qnnlab/state.hpp"

namespace qnnlab {

/**
 * Completely positive trace-preserving map as a Kraus decomposition,
 * rho -> sum_k K_k rho K_k^dagger.
 *
 * `kind` tags channels with a cheaper closed-form action (currently only
 * depolarizing); apply_channel uses it as a fast path that is numerically
 * identical to the generic Kraus sum.
 */
struct KrausChannel {
    enum class Kind { Generic, Depolarizing };

    std::uint32_t arity = 1; // qubits acted on (1 or 2)
    std::vector<Eigen::MatrixXcd> kraus;
    Kind kind = Kind::Generic;
    double kind_param = 0.0;
};

KrausChannel identity_channel(std::uint32_t arity);

/// rho -> (1-p) rho + p I/2^arity on the target subsystem.
KrausChannel depolarizing(double p, std::uint32_t arity);

/// Standard two-Kraus amplitude damping; |1><1| population decays to
/// |0><0| with probability gamma.
KrausChannel amplitude_damping(double gamma);

/// Diagonal-preserving dephasing; off-diagonals scale by sqrt(1-lambda).
KrausChannel phase_damping(double lambda);

/**
 * Amplitude damping composed with phase damping for a gate of the given
 * duration: gamma = 1 - exp(-t/T1) and lambda chosen so populations relax
 * as exp(-t/T1) and coherences as exp(-t/T2). Requires T2 <= 2 T1.
 * Infinite T1/T2 are accepted and give the identity.
 */
KrausChannel thermal_relaxation(double t1_us, double t2_us,
                                double duration_ns);

/// sum_k K_k^dagger K_k == I within tol.
bool is_trace_preserving(const KrausChannel &channel, double tol = 1e-12);

/// Kraus-sum application on the given target qubits. Throws ShapeError on
/// arity mismatch, BoundsError on bad targets.
void apply_channel_inplace(DensityMatrix &rho, const KrausChannel &channel,
                           std::span<const std::uint32_t> targets);

DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel &channel,
                            std::span<const std::uint32_t> targets);

/// Per-qubit readout confusion pair: p01 = P(read 1 | true 0),
/// p10 = P(read 0 | true 1).
struct ReadoutPair {
    double p01 = 0.0;
    double p10 = 0.0;
};

/// Applies the tensor product of per-qubit 2x2 confusion matrices
/// [[1-p01, p10], [p01, 1-p10]] to the distribution.
ProbDist apply_readout_error(const ProbDist &dist,
                             const std::vector<ReadoutPair> &calib);

} // namespace qnnlab
