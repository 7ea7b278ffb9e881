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

#include <variant>
#include <vector>

#include "qnnlab/channels.hpp"
#include "qnnlab/device_model.hpp"
#include "qnnlab/state.hpp"

namespace qnnlab {

struct ChannelOp {
    KrausChannel channel;
    std::vector<std::uint32_t> targets;
};

using NoisyOp = std::variant<GateOp, ChannelOp>;

/**
 * A circuit rewritten for noisy density-matrix evolution: the original
 * gates interleaved with noise channels, plus the readout confusion to
 * apply to the final distribution.
 */
struct NoisyCircuit {
    std::uint32_t n_qubits = 0;
    std::vector<NoisyOp> ops;
    std::vector<ReadoutPair> readout; // one pair per circuit qubit
};

/**
 * Deterministic rewrite: after each gate, one thermal-relaxation channel
 * per involved qubit (using that qubit's T1/T2 and the gate's duration),
 * then one depolarizing channel of the gate's calibrated error over the
 * gate's full arity. Readout confusion is recorded for the final stage,
 * not inserted as a channel.
 *
 * CNOTs must already respect the coupling map; there is no routing.
 */
NoisyCircuit insert_noise(const Circuit &circuit,
                          const DeviceNoiseModel &model);

void apply_noisy_op_inplace(DensityMatrix &rho, const NoisyOp &op);

/// Density evolution from |0...0> through all ops (readout not applied).
DensityMatrix run_noisy(const NoisyCircuit &circuit);
DensityMatrix run_noisy(const NoisyCircuit &circuit, DensityMatrix initial);

/// probabilities(rho) pushed through the circuit's readout confusion.
ProbDist readout_probabilities(const NoisyCircuit &circuit,
                               const DensityMatrix &rho);

} // namespace qnnlab
