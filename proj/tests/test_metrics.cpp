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
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qnnlab/channels.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/metrics.hpp"
#include "qnnlab/rng.hpp"

using namespace qnnlab;

TEST_CASE("chi2 to uniform on hand-computed distributions") {
    const ProbDist uniform{2, {0.25, 0.25, 0.25, 0.25}};
    CHECK(chi2_to_uniform(uniform) == 0.0);
    // Certain outcome on n = 1: (1 - 0.5)^2/0.5 + (0 - 0.5)^2/0.5 = 1.
    const ProbDist certain{1, {1.0, 0.0}};
    CHECK(std::abs(chi2_to_uniform(certain) - 1.0) < 1e-15);
    // General n: a basis state gives (1-u)^2/u + (2^n - 1) u = 2^n - 1.
    const ProbDist basis{3, {1, 0, 0, 0, 0, 0, 0, 0}};
    CHECK(std::abs(chi2_to_uniform(basis) - 7.0) < 1e-12);
}

TEST_CASE("chi2 between distributions is asymmetric and zero at equality") {
    const ProbDist a{1, {0.7, 0.3}};
    const ProbDist b{1, {0.5, 0.5}};
    CHECK(chi2_between(a, a) == 0.0);
    const double ab = chi2_between(a, b);
    const double ba = chi2_between(b, a);
    // Hand-computed: (0.2^2)/0.5 * 2 = 0.16 against the uniform ref.
    CHECK(std::abs(ab - 0.16) < 1e-12);
    CHECK(ab != ba);
    CHECK_THROWS_AS(chi2_between(a, ProbDist{2, {0.25, 0.25, 0.25, 0.25}}),
                    ShapeError);
}

TEST_CASE("total variation") {
    const ProbDist a{1, {1.0, 0.0}};
    const ProbDist b{1, {0.0, 1.0}};
    CHECK(total_variation(a, a) == 0.0);
    CHECK(std::abs(total_variation(a, b) - 1.0) < 1e-15);
    const ProbDist c{1, {0.6, 0.4}};
    CHECK(std::abs(total_variation(a, c) - 0.4) < 1e-15);
}

TEST_CASE("fidelity against pure targets") {
    const PureState zero = new_zero_state(2);
    CHECK(std::abs(fidelity(to_density(zero), zero) - 1.0) < 1e-14);
    // Mixed state: <0|I/4|0> = 1/4.
    CHECK(std::abs(fidelity(maximally_mixed(2), zero) - 0.25) < 1e-14);
    PureState plus = new_zero_state(2);
    apply_gate_inplace(plus, h(0));
    CHECK(std::abs(fidelity(to_density(zero), plus) - 0.5) < 1e-14);
}

TEST_CASE("exponential fit recovers a planted decay") {
    DecaySeries series;
    const double rate = 0.23;
    for (std::uint32_t k = 1; k <= 20; ++k) {
        series.layer_index.push_back(k);
        series.value.push_back(3.0 * std::exp(-rate * k));
    }
    const auto [fitted, r2] = fit_exponential_decay(series);
    CHECK(std::abs(fitted - rate) < 1e-12);
    CHECK(r2 > 1.0 - 1e-12);

    // Noise lowers r^2 but the rate stays close.
    Rng rng(4);
    DecaySeries noisy = series;
    for (double &v : noisy.value) {
        v *= std::exp(rng.uniform(-0.05, 0.05));
    }
    const auto [nrate, nr2] = fit_exponential_decay(noisy);
    CHECK(std::abs(nrate - rate) < 0.02);
    CHECK(nr2 > 0.9);
}

TEST_CASE("exponential fit edge cases") {
    DecaySeries flat;
    for (std::uint32_t k = 1; k <= 6; ++k) {
        flat.layer_index.push_back(k);
        flat.value.push_back(2.5);
    }
    const auto [rate, r2] = fit_exponential_decay(flat);
    CHECK(rate == 0.0);
    CHECK(r2 == 0.0);

    DecaySeries tiny;
    tiny.layer_index = {1, 2, 3, 4};
    tiny.value = {1.0, 0.5, 0.25, 0.125};
    CHECK_THROWS_AS(fit_exponential_decay(tiny), ArgumentError);

    DecaySeries negative;
    negative.layer_index = {1, 2, 3, 4, 5};
    negative.value = {1.0, 0.5, 0.0, 0.25, 0.125};
    CHECK_THROWS_AS(fit_exponential_decay(negative), DomainError);
}

TEST_CASE("chi2 of a depolarized basis state shrinks toward zero") {
    // |00> stays a product state under per-qubit depolarizing, so after k
    // rounds each marginal is (1/2 + e, 1/2 - e) with e = (1-p)^k / 2 and
    // chi2 against uniform is exactly 8 e^2 + 16 e^4. This closed form is
    // an independent oracle for the decay the harness measures.
    const double p = 0.2;
    DensityMatrix rho = to_density(new_zero_state(2));
    const std::uint32_t t0[] = {0};
    const std::uint32_t t1[] = {1};
    for (int k = 1; k <= 5; ++k) {
        apply_channel_inplace(rho, depolarizing(p, 1), t0);
        apply_channel_inplace(rho, depolarizing(p, 1), t1);
        const double e = std::pow(1.0 - p, k) / 2.0;
        const double expected = 8.0 * e * e + 16.0 * e * e * e * e;
        CHECK(std::abs(chi2_to_uniform(probabilities(rho)) - expected) <
              1e-12);
    }
}
