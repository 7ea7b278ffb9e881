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
#include "qnnlab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qnnlab/errors.hpp"

namespace qnnlab {

double chi2_to_uniform(const ProbDist &dist) {
    const double u = 1.0 / static_cast<double>(dist.probs.size());
    double acc = 0.0;
    for (double p : dist.probs) {
        const double d = p - u;
        acc += d * d / u;
    }
    return acc;
}

double chi2_between(const ProbDist &dist, const ProbDist &ref) {
    if (dist.probs.size() != ref.probs.size()) {
        throw ShapeError("distributions have different dimension");
    }
    constexpr double eps = 1e-12;
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        const double d = dist.probs[i] - ref.probs[i];
        acc += d * d / (ref.probs[i] + eps);
    }
    return acc;
}

double total_variation(const ProbDist &dist, const ProbDist &ref) {
    if (dist.probs.size() != ref.probs.size()) {
        throw ShapeError("distributions have different dimension");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += std::abs(dist.probs[i] - ref.probs[i]);
    }
    return 0.5 * acc;
}

double fidelity(const DensityMatrix &rho, const PureState &target) {
    if (rho.n_qubits() != target.n_qubits()) {
        throw ShapeError("state dimensions do not match");
    }
    const auto d = static_cast<Eigen::Index>(target.dim());
    const Eigen::Map<const Eigen::VectorXcd> psi(target.amplitudes().data(),
                                                 d);
    const double f = (psi.adjoint() * rho.matrix() * psi)(0).real();
    return std::clamp(f, 0.0, 1.0);
}

std::pair<double, double> fit_exponential_decay(const DecaySeries &series) {
    const std::size_t n = series.value.size();
    if (n < 5 || series.layer_index.size() != n) {
        throw ArgumentError("decay fit needs at least 5 points");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (series.layer_index[i] <= series.layer_index[i - 1]) {
            throw ArgumentError("layer indices must be strictly increasing");
        }
    }
    for (double v : series.value) {
        if (!(v > 0.0)) {
            throw DomainError("decay fit requires strictly positive values");
        }
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(series.layer_index[i]);
        const double y = std::log(series.value[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    const double slope = (dn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / dn;

    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / dn;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(series.layer_index[i]);
        const double y = std::log(series.value[i]);
        const double r = y - (intercept + slope * x);
        ss_res += r * r;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    // Constant series: slope and r^2 are undefined, reported as 0 by
    // convention (the tiny numerical slope would otherwise leak through).
    if (!(ss_tot > 0.0)) {
        return {0.0, 0.0};
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    return {-slope, r2};
}

} // namespace qnnlab
