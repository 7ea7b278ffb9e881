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
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qnnlab/rng.hpp"

namespace qnnlab {

using Complex = std::complex<double>;

/// Hard cap on register size: dense density matrices beyond 12 qubits do
/// not fit the intended desk-scale workloads.
inline constexpr std::uint32_t kMaxQubits = 12;

/**
 * Bit-ordering convention, used everywhere in this library:
 * qubit 0 is the MOST significant bit of a computational basis index.
 * For an n-qubit register, qubit q corresponds to bit (n-1-q) of the index.
 */
inline std::uint32_t qubit_bit(std::uint32_t n_qubits, std::uint32_t qubit) {
    return n_qubits - 1 - qubit;
}

enum class GateKind { RX, RY, RZ, Rot, H, X, CNOT };

const char *gate_kind_name(GateKind kind);

/// Number of qubits the gate acts on.
std::uint32_t gate_arity(GateKind kind);

/// Number of rotation angles the gate carries.
std::uint32_t gate_param_count(GateKind kind);

struct GateOp {
    GateKind kind;
    std::vector<std::uint32_t> targets; // ordered; CNOT = {control, target}
    std::vector<double> params;         // radians
    std::optional<double> duration_ns;

    /// Throws ShapeError / BoundsError if the op is malformed for an
    /// n-qubit register.
    void validate(std::uint32_t n_qubits) const;
};

GateOp rx(std::uint32_t q, double angle);
GateOp ry(std::uint32_t q, double angle);
GateOp rz(std::uint32_t q, double angle);
/// Rot(phi, theta, omega) = RZ(omega) * RY(theta) * RZ(phi).
GateOp rot(std::uint32_t q, double phi, double theta, double omega);
GateOp h(std::uint32_t q);
GateOp x(std::uint32_t q);
GateOp cnot(std::uint32_t control, std::uint32_t target);

struct Circuit {
    std::uint32_t n_qubits = 0;
    std::vector<GateOp> ops;

    void push(GateOp op);
    void validate() const;
};

/// Unitary matrix of a gate in its own 2^arity-dimensional subspace
/// (CNOT: index = control bit * 2 + target bit).
Eigen::MatrixXcd gate_matrix(const GateOp &op);

class PureState {
  public:
    /// Takes ownership of an amplitude vector; checks the power-of-two
    /// length and unit norm (1e-10).
    PureState(std::uint32_t n_qubits, std::vector<Complex> amplitudes);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amp_.size(); }
    const std::vector<Complex> &amplitudes() const { return amp_; }
    std::vector<Complex> &amplitudes() { return amp_; }

    double norm() const;

  private:
    std::uint32_t n_qubits_;
    std::vector<Complex> amp_;
};

class DensityMatrix {
  public:
    /// Checks Hermiticity and unit trace (1e-10). Positivity is only
    /// verified by tests, not on construction.
    DensityMatrix(std::uint32_t n_qubits, Eigen::MatrixXcd matrix);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXcd &matrix() const { return m_; }
    Eigen::MatrixXcd &matrix() { return m_; }

    double trace_real() const { return m_.trace().real(); }

  private:
    std::uint32_t n_qubits_;
    Eigen::MatrixXcd m_;
};

struct ProbDist {
    std::uint32_t n_qubits = 0;
    std::vector<double> probs;
};

/// |0...0> on n qubits. Throws CapacityError outside 1 <= n <= kMaxQubits.
PureState new_zero_state(std::uint32_t n_qubits);

/// Maximally mixed state I / 2^n.
DensityMatrix maximally_mixed(std::uint32_t n_qubits);

void apply_gate_inplace(PureState &state, const GateOp &op);
void apply_gate_inplace(DensityMatrix &rho, const GateOp &op);

/// Low-level gate action on a raw 2^n amplitude buffer (no norm check);
/// lets callers evolve auxiliary non-normalized vectors.
void apply_gate_raw(const GateOp &op, std::uint32_t n_qubits, Complex *data);

PureState apply_gate(PureState state, const GateOp &op);
DensityMatrix apply_gate(DensityMatrix rho, const GateOp &op);

void apply_circuit_inplace(PureState &state, const Circuit &circuit);
void apply_circuit_inplace(DensityMatrix &rho, const Circuit &circuit);

DensityMatrix to_density(const PureState &state);

/// Measurement distribution. Negative diagonal entries are clipped at 0;
/// total drift below 1e-12 is ignored, drift in [1e-12, 1e-6) is silently
/// renormalized, drift >= 1e-6 throws NumericalError.
ProbDist probabilities(const PureState &state);
ProbDist probabilities(const DensityMatrix &rho);

/// <Z_qubit> = P(bit 0) - P(bit 1).
double expect_z(const PureState &state, std::uint32_t qubit);
double expect_z(const DensityMatrix &rho, std::uint32_t qubit);
double expect_z(const ProbDist &dist, std::uint32_t qubit);

/// Multinomial sampling, deterministic for a fixed seed.
std::map<std::size_t, std::uint64_t>
sample_counts(const ProbDist &dist, std::uint64_t shots, std::uint64_t seed);

} // namespace qnnlab
