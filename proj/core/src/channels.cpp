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
#include "qnnlab/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qnnlab/errors.hpp"

namespace qnnlab {

namespace {

void check_unit_interval(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ArgumentError(std::string(name) + " must lie in [0, 1], got " +
                            std::to_string(v));
    }
}

std::vector<Eigen::Matrix2cd> pauli_basis_1q() {
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -i, i, 0;
    sz << 1, 0, 0, -1;
    return {id, sx, sy, sz};
}

/// Superoperator of the Kraus map restricted to its own subsystem:
/// S[(a,b), (a',b')] = sum_k K_{a a'} conj(K_{b b'}).
Eigen::MatrixXcd channel_superoperator(const KrausChannel &channel) {
    const Eigen::Index d = Eigen::Index{1} << channel.arity;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const auto &k : channel.kraus) {
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) {
                for (Eigen::Index ap = 0; ap < d; ++ap) {
                    for (Eigen::Index bp = 0; bp < d; ++bp) {
                        s(a * d + b, ap * d + bp) +=
                            k(a, ap) * std::conj(k(b, bp));
                    }
                }
            }
        }
    }
    return s;
}

void apply_superop_1q(const Eigen::MatrixXcd &s, DensityMatrix &rho,
                      std::uint32_t qubit) {
    const std::size_t d = rho.dim();
    const std::size_t mask = std::size_t{1}
                             << qubit_bit(rho.n_qubits(), qubit);
    Complex *data = rho.matrix().data();
    Complex sl[16];
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            sl[a * 4 + b] = s(a, b);
        }
    }
    Complex v[4], w[4];
    for (std::size_t c0 = 0; c0 < d; ++c0) {
        if (c0 & mask) {
            continue;
        }
        const std::size_t c1 = c0 | mask;
        for (std::size_t r0 = 0; r0 < d; ++r0) {
            if (r0 & mask) {
                continue;
            }
            const std::size_t r1 = r0 | mask;
            // vec order (row bit, col bit): 00, 01, 10, 11
            v[0] = data[r0 + c0 * d];
            v[1] = data[r0 + c1 * d];
            v[2] = data[r1 + c0 * d];
            v[3] = data[r1 + c1 * d];
            for (int a = 0; a < 4; ++a) {
                Complex acc = 0.0;
                for (int b = 0; b < 4; ++b) {
                    acc += sl[a * 4 + b] * v[b];
                }
                w[a] = acc;
            }
            data[r0 + c0 * d] = w[0];
            data[r0 + c1 * d] = w[1];
            data[r1 + c0 * d] = w[2];
            data[r1 + c1 * d] = w[3];
        }
    }
}

void apply_superop_2q(const Eigen::MatrixXcd &s, DensityMatrix &rho,
                      std::uint32_t q_hi, std::uint32_t q_lo) {
    const std::size_t d = rho.dim();
    const std::size_t mh = std::size_t{1} << qubit_bit(rho.n_qubits(), q_hi);
    const std::size_t ml = std::size_t{1} << qubit_bit(rho.n_qubits(), q_lo);
    Complex *data = rho.matrix().data();
    std::vector<Complex> sl(256);
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            sl[a * 16 + b] = s(a, b);
        }
    }
    Complex v[16], w[16];
    for (std::size_t c = 0; c < d; ++c) {
        if ((c & mh) || (c & ml)) {
            continue;
        }
        const std::size_t cols[4] = {c, c | ml, c | mh, c | mh | ml};
        for (std::size_t r = 0; r < d; ++r) {
            if ((r & mh) || (r & ml)) {
                continue;
            }
            const std::size_t rows[4] = {r, r | ml, r | mh, r | mh | ml};
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    v[a * 4 + b] = data[rows[a] + cols[b] * d];
                }
            }
            for (int a = 0; a < 16; ++a) {
                Complex acc = 0.0;
                for (int b = 0; b < 16; ++b) {
                    acc += sl[a * 16 + b] * v[b];
                }
                w[a] = acc;
            }
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    data[rows[a] + cols[b] * d] = w[a * 4 + b];
                }
            }
        }
    }
}

/// Closed-form depolarizing action on one or two qubits:
/// every block B -> (1-p) B + p (tr B / 2^arity) I.
void apply_depolarizing_fast(DensityMatrix &rho, double p,
                             std::span<const std::uint32_t> targets) {
    const std::size_t d = rho.dim();
    Complex *data = rho.matrix().data();
    if (targets.size() == 1) {
        const std::size_t mask = std::size_t{1}
                                 << qubit_bit(rho.n_qubits(), targets[0]);
        for (std::size_t c0 = 0; c0 < d; ++c0) {
            if (c0 & mask) {
                continue;
            }
            const std::size_t c1 = c0 | mask;
            for (std::size_t r0 = 0; r0 < d; ++r0) {
                if (r0 & mask) {
                    continue;
                }
                const std::size_t r1 = r0 | mask;
                Complex &b00 = data[r0 + c0 * d];
                Complex &b01 = data[r0 + c1 * d];
                Complex &b10 = data[r1 + c0 * d];
                Complex &b11 = data[r1 + c1 * d];
                const Complex mix = p * 0.5 * (b00 + b11);
                b00 = (1.0 - p) * b00 + mix;
                b11 = (1.0 - p) * b11 + mix;
                b01 *= 1.0 - p;
                b10 *= 1.0 - p;
            }
        }
        return;
    }
    const std::size_t mh = std::size_t{1}
                           << qubit_bit(rho.n_qubits(), targets[0]);
    const std::size_t ml = std::size_t{1}
                           << qubit_bit(rho.n_qubits(), targets[1]);
    for (std::size_t c = 0; c < d; ++c) {
        if ((c & mh) || (c & ml)) {
            continue;
        }
        const std::size_t cols[4] = {c, c | ml, c | mh, c | mh | ml};
        for (std::size_t r = 0; r < d; ++r) {
            if ((r & mh) || (r & ml)) {
                continue;
            }
            const std::size_t rows[4] = {r, r | ml, r | mh, r | mh | ml};
            Complex tr = 0.0;
            for (int a = 0; a < 4; ++a) {
                tr += data[rows[a] + cols[a] * d];
            }
            const Complex mix = p * 0.25 * tr;
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    Complex &e = data[rows[a] + cols[b] * d];
                    e *= 1.0 - p;
                    if (a == b) {
                        e += mix;
                    }
                }
            }
        }
    }
}

} // namespace

KrausChannel identity_channel(std::uint32_t arity) {
    if (arity != 1 && arity != 2) {
        throw ArgumentError("channel arity must be 1 or 2");
    }
    const Eigen::Index d = Eigen::Index{1} << arity;
    return KrausChannel{arity, {Eigen::MatrixXcd::Identity(d, d)}};
}

KrausChannel depolarizing(double p, std::uint32_t arity) {
    check_unit_interval(p, "p");
    if (arity != 1 && arity != 2) {
        throw ArgumentError("channel arity must be 1 or 2");
    }
    const double dim = std::pow(2.0, arity);
    const double dsq = dim * dim;

    const auto paulis_1q = pauli_basis_1q();
    std::vector<Eigen::MatrixXcd> paulis;
    if (arity == 1) {
        paulis.assign(paulis_1q.begin(), paulis_1q.end());
    } else {
        for (const auto &a : paulis_1q) {
            for (const auto &b : paulis_1q) {
                Eigen::MatrixXcd t(4, 4);
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        t.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
                    }
                }
                paulis.push_back(std::move(t));
            }
        }
    }

    KrausChannel ch;
    ch.arity = arity;
    ch.kind = KrausChannel::Kind::Depolarizing;
    ch.kind_param = p;
    const double c_id = 1.0 - p + p / dsq;
    const double c_rest = p / dsq;
    for (std::size_t k = 0; k < paulis.size(); ++k) {
        const double c = (k == 0) ? c_id : c_rest;
        if (c > 0.0) {
            ch.kraus.push_back(std::sqrt(c) * paulis[k]);
        }
    }
    return ch;
}

KrausChannel amplitude_damping(double gamma) {
    check_unit_interval(gamma, "gamma");
    Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
    k0(1, 1) = std::sqrt(1.0 - gamma);
    Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    KrausChannel ch{1, {std::move(k0)}};
    if (gamma > 0.0) {
        ch.kraus.push_back(std::move(k1));
    }
    return ch;
}

KrausChannel phase_damping(double lambda) {
    check_unit_interval(lambda, "lambda");
    Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
    k0(1, 1) = std::sqrt(1.0 - lambda);
    Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
    k1(1, 1) = std::sqrt(lambda);
    KrausChannel ch{1, {std::move(k0)}};
    if (lambda > 0.0) {
        ch.kraus.push_back(std::move(k1));
    }
    return ch;
}

KrausChannel thermal_relaxation(double t1_us, double t2_us,
                                double duration_ns) {
    const bool t1_inf = std::isinf(t1_us);
    const bool t2_inf = std::isinf(t2_us);
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) {
        throw ArgumentError("T1 and T2 must be positive");
    }
    if (!t2_inf && !t1_inf && t2_us > 2.0 * t1_us * (1.0 + 1e-12)) {
        throw PhysicalityError("T2 must not exceed 2*T1 (T1=" +
                               std::to_string(t1_us) + "us, T2=" +
                               std::to_string(t2_us) + "us)");
    }
    if (t2_inf && !t1_inf) {
        throw PhysicalityError("T2 must not exceed 2*T1");
    }
    if (duration_ns < 0.0) {
        throw ArgumentError("duration must be >= 0");
    }

    const double t_us = duration_ns * 1e-3;
    const double gamma = t1_inf ? 0.0 : 1.0 - std::exp(-t_us / t1_us);
    const double inv_t1 = t1_inf ? 0.0 : 1.0 / t1_us;
    const double inv_t2 = t2_inf ? 0.0 : 1.0 / t2_us;
    // Off-diagonals shrink by sqrt(1-gamma) * sqrt(1-lambda); the factor
    // of 2 makes the combined decay exactly exp(-t/T2).
    const double inv_tphi = std::max(0.0, inv_t2 - 0.5 * inv_t1);
    const double lambda = 1.0 - std::exp(-2.0 * t_us * inv_tphi);

    const KrausChannel ad = amplitude_damping(gamma);
    const KrausChannel pd = phase_damping(lambda);
    KrausChannel ch{1, {}};
    for (const auto &p : pd.kraus) {
        for (const auto &a : ad.kraus) {
            Eigen::MatrixXcd k = p * a;
            if (k.squaredNorm() > 0.0) {
                ch.kraus.push_back(std::move(k));
            }
        }
    }
    return ch;
}

bool is_trace_preserving(const KrausChannel &channel, double tol) {
    const Eigen::Index d = Eigen::Index{1} << channel.arity;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &k : channel.kraus) {
        acc += k.adjoint() * k;
    }
    return (acc - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <=
           tol;
}

void apply_channel_inplace(DensityMatrix &rho, const KrausChannel &channel,
                           std::span<const std::uint32_t> targets) {
    if (targets.size() != channel.arity) {
        throw ShapeError("channel arity " + std::to_string(channel.arity) +
                         " does not match " + std::to_string(targets.size()) +
                         " targets");
    }
    for (std::uint32_t t : targets) {
        if (t >= rho.n_qubits()) {
            throw BoundsError("channel target out of range");
        }
    }
    if (channel.arity == 2 && targets[0] == targets[1]) {
        throw BoundsError("duplicate channel target");
    }
    if (channel.kraus.empty()) {
        throw ShapeError("channel has no Kraus operators");
    }

    if (channel.kind == KrausChannel::Kind::Depolarizing) {
        apply_depolarizing_fast(rho, channel.kind_param, targets);
        return;
    }

    const Eigen::MatrixXcd s = channel_superoperator(channel);
    if (channel.arity == 1) {
        apply_superop_1q(s, rho, targets[0]);
    } else {
        apply_superop_2q(s, rho, targets[0], targets[1]);
    }
}

DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel &channel,
                            std::span<const std::uint32_t> targets) {
    apply_channel_inplace(rho, channel, targets);
    return rho;
}

ProbDist apply_readout_error(const ProbDist &dist,
                             const std::vector<ReadoutPair> &calib) {
    if (calib.size() != dist.n_qubits) {
        throw ShapeError("need one (p01, p10) pair per qubit");
    }
    for (const ReadoutPair &rp : calib) {
        check_unit_interval(rp.p01, "p01");
        check_unit_interval(rp.p10, "p10");
    }
    ProbDist out = dist;
    for (std::uint32_t q = 0; q < dist.n_qubits; ++q) {
        const std::size_t mask = std::size_t{1}
                                 << qubit_bit(dist.n_qubits, q);
        const double p01 = calib[q].p01;
        const double p10 = calib[q].p10;
        for (std::size_t i0 = 0; i0 < out.probs.size(); ++i0) {
            if (i0 & mask) {
                continue;
            }
            const std::size_t i1 = i0 | mask;
            const double p0 = out.probs[i0];
            const double p1 = out.probs[i1];
            out.probs[i0] = (1.0 - p01) * p0 + p10 * p1;
            out.probs[i1] = p01 * p0 + (1.0 - p10) * p1;
        }
    }
    return out;
}

} // namespace qnnlab
