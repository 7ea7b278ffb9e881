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
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qnnlab/channels.hpp"
#include "qnnlab/mottonen.hpp"
#include "qnnlab/qnn.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/state.hpp"

using namespace qnnlab;

namespace {

std::vector<double> random_unit_vector(std::size_t len, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(len);
    double norm_sq = 0.0;
    for (double &x : v) {
        x = rng.uniform();
        norm_sq += x * x;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double &x : v) {
        x *= inv;
    }
    return v;
}

void BM_PureGateLayer(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    PureState psi = new_zero_state(n);
    std::vector<double> params(n * 3, 0.4);
    const std::vector<GateOp> layer = strongly_entangling_layer(params, n);
    for (auto _ : state) {
        for (const GateOp &op : layer) {
            apply_gate_inplace(psi, op);
        }
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(layer.size()));
}
BENCHMARK(BM_PureGateLayer)->Arg(4)->Arg(8)->Arg(10)->Arg(12);

void BM_DensityGateLayer(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    DensityMatrix rho = maximally_mixed(n);
    std::vector<double> params(n * 3, 0.4);
    const std::vector<GateOp> layer = strongly_entangling_layer(params, n);
    for (auto _ : state) {
        for (const GateOp &op : layer) {
            apply_gate_inplace(rho, op);
        }
        benchmark::DoNotOptimize(rho.matrix().data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(layer.size()));
}
BENCHMARK(BM_DensityGateLayer)->Arg(4)->Arg(6)->Arg(8);

void BM_Depolarizing1q(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    DensityMatrix rho = maximally_mixed(n);
    const KrausChannel channel = depolarizing(0.01, 1);
    const std::uint32_t targets[] = {n / 2};
    for (auto _ : state) {
        apply_channel_inplace(rho, channel, targets);
        benchmark::DoNotOptimize(rho.matrix().data());
    }
}
BENCHMARK(BM_Depolarizing1q)->Arg(4)->Arg(6)->Arg(8);

void BM_ThermalRelaxation(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    DensityMatrix rho = maximally_mixed(n);
    const KrausChannel channel = thermal_relaxation(100.0, 80.0, 35.5);
    const std::uint32_t targets[] = {0};
    for (auto _ : state) {
        apply_channel_inplace(rho, channel, targets);
        benchmark::DoNotOptimize(rho.matrix().data());
    }
}
BENCHMARK(BM_ThermalRelaxation)->Arg(4)->Arg(6)->Arg(8);

void BM_MottonenSynthesis(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const std::vector<double> target =
        random_unit_vector(std::size_t{1} << n, 7);
    for (auto _ : state) {
        const Circuit prep = synthesize_prep(target);
        benchmark::DoNotOptimize(prep.ops.data());
    }
}
BENCHMARK(BM_MottonenSynthesis)->Arg(4)->Arg(8)->Arg(10);

void BM_QnnForward(benchmark::State &state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const QnnModel model = init_model(n, 2, {0, 1}, 3);
    const std::vector<double> input =
        random_unit_vector(std::size_t{1} << n, 9);
    for (auto _ : state) {
        const ForwardResult out = qnn_forward(input, model);
        benchmark::DoNotOptimize(out.probs.data());
    }
}
BENCHMARK(BM_QnnForward)->Arg(4)->Arg(8);

} // namespace

BENCHMARK_MAIN();
