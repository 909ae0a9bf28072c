// SPDX-License-Identifier: Apache-2.0
//
// arrayforge - combining network design for compressive antenna arrays
// Copyright (C) 2026 The arrayforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "arrayforge/crb_eval.hpp"
#include "arrayforge/sgd_designer.hpp"

using namespace arrayforge;

namespace
{
const ArrayGeometry &suca()
{
    static const ArrayGeometry g = make_suca(3, 11, 0.5, 0.68);
    return g;
}

void BM_Gradient(benchmark::State &state)
{
    OptimizerConfig cfg;
    cfg.batch_size = static_cast<int>(state.range(0));
    Rng rng(1);
    const auto batch = sample_batch(cfg, rng);
    const auto phi = random_gaussian_phi(13, 33, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(gradient(suca(), phi, batch));
}
BENCHMARK(BM_Gradient)->Arg(50)->Arg(250)->Unit(benchmark::kMicrosecond);

void BM_DesignStep(benchmark::State &state)
{
    OptimizerConfig cfg;
    auto s = initial_state(suca(), 13, cfg);
    for (auto _ : state)
    {
        s = step(suca(), std::move(s), cfg);
        if (s.iteration >= cfg.iterations)
            s = initial_state(suca(), 13, cfg);
    }
}
BENCHMARK(BM_DesignStep)->Unit(benchmark::kMicrosecond);

void BM_GridScfError(benchmark::State &state)
{
    const ScfGrid grid{61, 31, {-std::numbers::pi, std::numbers::pi}, {0.0, std::numbers::pi}};
    const auto phi = random_gaussian_phi(13, 33, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(grid_scf_error(suca(), phi, grid, 1));
}
BENCHMARK(BM_GridScfError)->Unit(benchmark::kMillisecond);

void BM_Crb(benchmark::State &state)
{
    CrbScenario s;
    s.sources = {{0.3, 1.1}, {1.4, 1.9}};
    s.phi = random_gaussian_phi(13, 33, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(crb(suca(), s));
}
BENCHMARK(BM_Crb)->Unit(benchmark::kMicrosecond);
} // namespace
