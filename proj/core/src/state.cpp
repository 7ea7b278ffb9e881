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
#include "qnnlab/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// Applies a 2x2 unitary to the virtual vector {data[i * stride]} on the
/// given index bit. Used directly for statevectors (stride 1) and for the
/// row/column passes of the density-matrix update.
void apply_1q_kernel(const Eigen::Matrix2cd &u, Complex *data, std::size_t dim,
                     std::uint32_t bitpos, std::size_t stride) {
    const std::size_t step = std::size_t{1} << bitpos;
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t block = 0; block < dim; block += 2 * step) {
        for (std::size_t i = block; i < block + step; ++i) {
            Complex &a = data[i * stride];
            Complex &b = data[(i + step) * stride];
            const Complex a0 = a;
            a = u00 * a0 + u01 * b;
            b = u10 * a0 + u11 * b;
        }
    }
}

/// 4x4 unitary on two index bits; matrix index = bit(hi) * 2 + bit(lo)
/// where hi/lo follow the order of the bit positions passed in.
void apply_2q_kernel(const Eigen::Matrix4cd &u, Complex *data, std::size_t dim,
                     std::uint32_t bit_hi, std::uint32_t bit_lo,
                     std::size_t stride) {
    const std::size_t mh = std::size_t{1} << bit_hi;
    const std::size_t ml = std::size_t{1} << bit_lo;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mh) != 0 || (i & ml) != 0) {
            continue;
        }
        const std::size_t idx[4] = {i, i | ml, i | mh, i | mh | ml};
        Complex v[4];
        for (int k = 0; k < 4; ++k) {
            v[k] = data[idx[k] * stride];
        }
        for (int r = 0; r < 4; ++r) {
            Complex acc = 0.0;
            for (int c = 0; c < 4; ++c) {
                acc += u(r, c) * v[c];
            }
            data[idx[r] * stride] = acc;
        }
    }
}

void apply_op_virtual(const GateOp &op, std::uint32_t n_qubits, Complex *data,
                      std::size_t dim, std::size_t stride, bool conjugate) {
    Eigen::MatrixXcd u = gate_matrix(op);
    if (conjugate) {
        u = u.conjugate();
    }
    if (op.targets.size() == 1) {
        apply_1q_kernel(u, data, dim, qubit_bit(n_qubits, op.targets[0]),
                        stride);
    } else {
        apply_2q_kernel(u, data, dim, qubit_bit(n_qubits, op.targets[0]),
                        qubit_bit(n_qubits, op.targets[1]), stride);
    }
}

ProbDist finalize_probs(std::uint32_t n_qubits, std::vector<double> probs) {
    double sum = 0.0;
    for (double &p : probs) {
        p = std::max(p, 0.0);
        sum += p;
    }
    const double drift = std::abs(sum - 1.0);
    if (drift >= 1e-6) {
        throw NumericalError("probability drift " + std::to_string(drift) +
                             " exceeds the numerical-integrity bound");
    }
    if (drift > 1e-12) {
        for (double &p : probs) {
            p /= sum;
        }
    }
    return ProbDist{n_qubits, std::move(probs)};
}

} // namespace

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "rx";
    case GateKind::RY:
        return "ry";
    case GateKind::RZ:
        return "rz";
    case GateKind::Rot:
        return "rot";
    case GateKind::H:
        return "h";
    case GateKind::X:
        return "x";
    case GateKind::CNOT:
        return "cnot";
    }
    return "?";
}

std::uint32_t gate_arity(GateKind kind) {
    return kind == GateKind::CNOT ? 2 : 1;
}

std::uint32_t gate_param_count(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        return 1;
    case GateKind::Rot:
        return 3;
    default:
        return 0;
    }
}

void GateOp::validate(std::uint32_t n_qubits) const {
    if (targets.size() != gate_arity(kind)) {
        throw ShapeError(std::string(gate_kind_name(kind)) + " expects " +
                         std::to_string(gate_arity(kind)) + " targets, got " +
                         std::to_string(targets.size()));
    }
    if (params.size() != gate_param_count(kind)) {
        throw ShapeError(std::string(gate_kind_name(kind)) + " expects " +
                         std::to_string(gate_param_count(kind)) +
                         " params, got " + std::to_string(params.size()));
    }
    for (std::uint32_t t : targets) {
        if (t >= n_qubits) {
            throw BoundsError("qubit index " + std::to_string(t) +
                              " out of range for " + std::to_string(n_qubits) +
                              " qubits");
        }
    }
    if (targets.size() == 2 && targets[0] == targets[1]) {
        throw BoundsError("duplicate qubit index " +
                          std::to_string(targets[0]));
    }
}

GateOp rx(std::uint32_t q, double angle) {
    return GateOp{GateKind::RX, {q}, {angle}, {}};
}
GateOp ry(std::uint32_t q, double angle) {
    return GateOp{GateKind::RY, {q}, {angle}, {}};
}
GateOp rz(std::uint32_t q, double angle) {
    return GateOp{GateKind::RZ, {q}, {angle}, {}};
}
GateOp rot(std::uint32_t q, double phi, double theta, double omega) {
    return GateOp{GateKind::Rot, {q}, {phi, theta, omega}, {}};
}
GateOp h(std::uint32_t q) { return GateOp{GateKind::H, {q}, {}, {}}; }
GateOp x(std::uint32_t q) { return GateOp{GateKind::X, {q}, {}, {}}; }
GateOp cnot(std::uint32_t control, std::uint32_t target) {
    return GateOp{GateKind::CNOT, {control, target}, {}, {}};
}

void Circuit::push(GateOp op) {
    op.validate(n_qubits);
    ops.push_back(std::move(op));
}

void Circuit::validate() const {
    for (const GateOp &op : ops) {
        op.validate(n_qubits);
    }
}

Eigen::MatrixXcd gate_matrix(const GateOp &op) {
    const Complex i(0.0, 1.0);
    switch (op.kind) {
    case GateKind::RX: {
        const double half = op.params.at(0) / 2.0;
        Eigen::Matrix2cd u;
        u << std::cos(half), -i * std::sin(half), //
            -i * std::sin(half), std::cos(half);
        return u;
    }
    case GateKind::RY: {
        const double half = op.params.at(0) / 2.0;
        Eigen::Matrix2cd u;
        u << std::cos(half), -std::sin(half), //
            std::sin(half), std::cos(half);
        return u;
    }
    case GateKind::RZ: {
        const double half = op.params.at(0) / 2.0;
        Eigen::Matrix2cd u;
        u << std::exp(-i * half), 0.0, 0.0, std::exp(i * half);
        return u;
    }
    case GateKind::Rot: {
        const Eigen::MatrixXcd a = gate_matrix(rz(0, op.params.at(0)));
        const Eigen::MatrixXcd b = gate_matrix(ry(0, op.params.at(1)));
        const Eigen::MatrixXcd c = gate_matrix(rz(0, op.params.at(2)));
        return c * b * a;
    }
    case GateKind::H: {
        Eigen::Matrix2cd u;
        const double s = 1.0 / std::sqrt(2.0);
        u << s, s, s, -s;
        return u;
    }
    case GateKind::X: {
        Eigen::Matrix2cd u;
        u << 0.0, 1.0, 1.0, 0.0;
        return u;
    }
    case GateKind::CNOT: {
        Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
        u(0, 0) = 1.0;
        u(1, 1) = 1.0;
        u(2, 3) = 1.0;
        u(3, 2) = 1.0;
        return u;
    }
    }
    throw ArgumentError("unknown gate kind");
}

PureState::PureState(std::uint32_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amp_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || !is_power_of_two(amp_.size()) ||
        amp_.size() != (std::size_t{1} << n_qubits_)) {
        throw ShapeError("amplitude vector length must be 2^n_qubits");
    }
    if (std::abs(norm() - 1.0) > 1e-10) {
        throw NormalizationError("state norm deviates from 1 by more than "
                                 "1e-10");
    }
}

double PureState::norm() const {
    double s = 0.0;
    for (const Complex &a : amp_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

DensityMatrix::DensityMatrix(std::uint32_t n_qubits, Eigen::MatrixXcd matrix)
    : n_qubits_(n_qubits), m_(std::move(matrix)) {
    const auto d = std::size_t{1} << n_qubits_;
    if (n_qubits_ < 1 || static_cast<std::size_t>(m_.rows()) != d ||
        static_cast<std::size_t>(m_.cols()) != d) {
        throw ShapeError("density matrix must be 2^n x 2^n");
    }
    if (!m_.isApprox(m_.adjoint(), 1e-10)) {
        throw DomainError("density matrix is not Hermitian within 1e-10");
    }
    if (std::abs(m_.trace().real() - 1.0) > 1e-10 ||
        std::abs(m_.trace().imag()) > 1e-10) {
        throw DomainError("density matrix trace deviates from 1");
    }
}

PureState new_zero_state(std::uint32_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n_qubits));
    }
    std::vector<Complex> amp(std::size_t{1} << n_qubits, Complex(0.0, 0.0));
    amp[0] = 1.0;
    return PureState(n_qubits, std::move(amp));
}

DensityMatrix maximally_mixed(std::uint32_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits out of range");
    }
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    return DensityMatrix(n_qubits, Eigen::MatrixXcd::Identity(d, d) /
                                       static_cast<double>(d));
}

void apply_gate_raw(const GateOp &op, std::uint32_t n_qubits, Complex *data) {
    op.validate(n_qubits);
    apply_op_virtual(op, n_qubits, data, std::size_t{1} << n_qubits, 1,
                     false);
}

void apply_gate_inplace(PureState &state, const GateOp &op) {
    op.validate(state.n_qubits());
    apply_op_virtual(op, state.n_qubits(), state.amplitudes().data(),
                     state.dim(), 1, false);
}

void apply_gate_inplace(DensityMatrix &rho, const GateOp &op) {
    op.validate(rho.n_qubits());
    const std::size_t d = rho.dim();
    Complex *data = rho.matrix().data(); // column-major
    // rho -> U rho: each column transforms like a statevector.
    for (std::size_t col = 0; col < d; ++col) {
        apply_op_virtual(op, rho.n_qubits(), data + col * d, d, 1, false);
    }
    // (U rho) -> (U rho) U^dagger: each row transforms by conj(U).
    for (std::size_t row = 0; row < d; ++row) {
        apply_op_virtual(op, rho.n_qubits(), data + row, d, d, true);
    }
}

PureState apply_gate(PureState state, const GateOp &op) {
    apply_gate_inplace(state, op);
    return state;
}

DensityMatrix apply_gate(DensityMatrix rho, const GateOp &op) {
    apply_gate_inplace(rho, op);
    return rho;
}

void apply_circuit_inplace(PureState &state, const Circuit &circuit) {
    for (const GateOp &op : circuit.ops) {
        apply_gate_inplace(state, op);
    }
}

void apply_circuit_inplace(DensityMatrix &rho, const Circuit &circuit) {
    for (const GateOp &op : circuit.ops) {
        apply_gate_inplace(rho, op);
    }
}

DensityMatrix to_density(const PureState &state) {
    const auto d = static_cast<Eigen::Index>(state.dim());
    Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(), d);
    return DensityMatrix(state.n_qubits(), psi * psi.adjoint());
}

ProbDist probabilities(const PureState &state) {
    std::vector<double> p(state.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(state.amplitudes()[i]);
    }
    return finalize_probs(state.n_qubits(), std::move(p));
}

ProbDist probabilities(const DensityMatrix &rho) {
    std::vector<double> p(rho.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rho.matrix()(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(i))
                   .real();
    }
    return finalize_probs(rho.n_qubits(), std::move(p));
}

namespace {
double expect_z_from(const std::vector<double> &p, std::uint32_t n_qubits,
                     std::uint32_t qubit) {
    if (qubit >= n_qubits) {
        throw BoundsError("qubit index out of range");
    }
    const std::size_t mask = std::size_t{1} << qubit_bit(n_qubits, qubit);
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        e += (i & mask) ? -p[i] : p[i];
    }
    return e;
}
} // namespace

double expect_z(const PureState &state, std::uint32_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw BoundsError("qubit index out of range");
    }
    const std::size_t mask =
        std::size_t{1} << qubit_bit(state.n_qubits(), qubit);
    double e = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amplitudes()[i]);
        e += (i & mask) ? -p : p;
    }
    return e;
}

double expect_z(const DensityMatrix &rho, std::uint32_t qubit) {
    if (qubit >= rho.n_qubits()) {
        throw BoundsError("qubit index out of range");
    }
    const std::size_t mask = std::size_t{1} << qubit_bit(rho.n_qubits(), qubit);
    double e = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const double p = rho.matrix()(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(i))
                             .real();
        e += (i & mask) ? -p : p;
    }
    return e;
}

double expect_z(const ProbDist &dist, std::uint32_t qubit) {
    return expect_z_from(dist.probs, dist.n_qubits, qubit);
}

std::map<std::size_t, std::uint64_t>
sample_counts(const ProbDist &dist, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ArgumentError("shots must be >= 1");
    }
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    std::map<std::size_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cdf.begin(),
                                     static_cast<std::ptrdiff_t>(cdf.size()) -
                                         1));
        ++counts[idx];
    }
    return counts;
}

} // namespace qnnlab
