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
#include <optional>
#include <vector>

#include "qnnlab/state.hpp"

namespace qnnlab {

/// One metric value per circuit depth, with an optional log-linear fit.
struct DecaySeries {
    std::vector<std::uint32_t> layer_index; // strictly increasing
    std::vector<double> value;
    std::optional<double> fitted_rate;
    std::optional<double> fit_r2;
};

/// Sum_i (p_i - u)^2 / u against the uniform distribution u = 2^-n.
double chi2_to_uniform(const ProbDist &dist);

/// Sum_i (p_i - r_i)^2 / (r_i + eps), eps = 1e-12. Asymmetric in its
/// arguments by definition.
double chi2_between(const ProbDist &dist, const ProbDist &ref);

/// 0.5 * sum_i |p_i - r_i|, in [0, 1].
double total_variation(const ProbDist &dist, const ProbDist &ref);

/// <psi| rho |psi>, clipped to [0, 1].
double fidelity(const DensityMatrix &rho, const PureState &target);

/// Least-squares line on (layer, ln value); returns (rate = -slope, r^2).
/// A constant series reports rate 0, r^2 0. Values must be > 0 and the
/// series must hold at least 5 points (callers truncate the converged
/// tail below 1e-9 first).
std::pair<double, double> fit_exponential_decay(const DecaySeries &series);

} // namespace qnnlab
