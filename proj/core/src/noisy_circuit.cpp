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
#include "qnnlab/noisy_circuit.hpp"

#include <string>

#include "qnnlab/errors.hpp"

namespace qnnlab {

NoisyCircuit insert_noise(const Circuit &circuit,
                          const DeviceNoiseModel &model) {
    circuit.validate();
    if (circuit.n_qubits > model.n_qubits) {
        throw CapacityError("circuit uses " +
                            std::to_string(circuit.n_qubits) +
                            " qubits but device \"" + model.name +
                            "\" has " + std::to_string(model.n_qubits));
    }

    NoisyCircuit out;
    out.n_qubits = circuit.n_qubits;
    for (const GateOp &op : circuit.ops) {
        if (op.kind == GateKind::CNOT &&
            !model.coupled(op.targets[0], op.targets[1])) {
            throw ConnectivityError("cnot pair (" +
                                    std::to_string(op.targets[0]) + "," +
                                    std::to_string(op.targets[1]) +
                                    ") not in device \"" + model.name +
                                    "\" coupling map");
        }
        const GateCalibration &calib =
            model.gate_calibration(op.kind, op.targets);
        const double duration =
            op.duration_ns.has_value() ? *op.duration_ns : calib.duration_ns;

        out.ops.emplace_back(op);
        for (std::uint32_t q : op.targets) {
            const QubitCalibration &qc = model.qubits[q];
            out.ops.emplace_back(ChannelOp{
                thermal_relaxation(qc.t1_us, qc.t2_us, duration), {q}});
        }
        out.ops.emplace_back(ChannelOp{
            depolarizing(calib.error, gate_arity(op.kind)), op.targets});
    }
    for (std::uint32_t q = 0; q < circuit.n_qubits; ++q) {
        out.readout.push_back(
            {model.qubits[q].readout_p01, model.qubits[q].readout_p10});
    }
    return out;
}

void apply_noisy_op_inplace(DensityMatrix &rho, const NoisyOp &op) {
    if (const GateOp *gate = std::get_if<GateOp>(&op)) {
        apply_gate_inplace(rho, *gate);
    } else {
        const ChannelOp &ch = std::get<ChannelOp>(op);
        apply_channel_inplace(rho, ch.channel, ch.targets);
    }
}

DensityMatrix run_noisy(const NoisyCircuit &circuit) {
    return run_noisy(circuit, to_density(new_zero_state(circuit.n_qubits)));
}

DensityMatrix run_noisy(const NoisyCircuit &circuit, DensityMatrix initial) {
    if (initial.n_qubits() != circuit.n_qubits) {
        throw ShapeError("initial state qubit count does not match circuit");
    }
    for (const NoisyOp &op : circuit.ops) {
        apply_noisy_op_inplace(initial, op);
    }
    return initial;
}

ProbDist readout_probabilities(const NoisyCircuit &circuit,
                               const DensityMatrix &rho) {
    return apply_readout_error(probabilities(rho), circuit.readout);
}

} // namespace qnnlab
