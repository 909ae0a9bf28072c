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

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "arrayforge/scf_objective.hpp"

namespace arrayforge
{

using Rng = std::mt19937_64;

/// Hyperparameters of the momentum SGD. Defaults are the full-scale design
/// settings (5000 steps of 250 directions, step 1e-2, drag 0.1, directions
/// uniform on [0, 2pi) x [pi/4, 3pi/4]).
struct OptimizerConfig
{
    int iterations = 5000;
    int batch_size = 250;
    double step_size = 1e-2;
    double drag = 0.1;
    AngleRange azimuth{0.0, 6.28318530717958647692};
    AngleRange elevation{0.78539816339744830962, 2.35619449019234492885};
    std::uint64_t seed = 0;
    int renormalize_every = 1;
    int record_every = 10;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// How the per-batch gradient is scaled.
enum class GradientScaling
{
    /// Gradient of ||E||_F^2 / L^2, consistent with batch_cost.
    normalized,
    /// Gradient of the raw ||E||_F^2.
    unnormalized,
};

/// Gradient of the per-batch cost with respect to Phi:
///   4 Phi P (G - I) P,  P = A A^H,
/// optionally divided by L^2. Real and imaginary parts are the partial
/// derivatives with respect to Re(Phi) and Im(Phi).
cmat gradient(const ArrayGeometry &geometry, const CombiningMatrix &phi, const AngleBatch &batch,
              GradientScaling scaling = GradientScaling::normalized);

/// batch_size directions drawn i.i.d. uniformly from the configured
/// azimuth x elevation rectangle.
AngleBatch sample_batch(const OptimizerConfig &config, Rng &rng, std::int64_t index = 0);

/// Circularly-symmetric complex Gaussian entries, columns normalized.
CombiningMatrix random_gaussian_phi(int rows, int cols, std::uint64_t seed);

struct OptimizerState
{
    CombiningMatrix phi;
    cmat velocity;
    int iteration = 0;
    Rng rng;
};

/// Phi_0 = random_gaussian_phi(channels, N, seed), zero velocity, batch
/// stream seeded independently from the same seed.
OptimizerState initial_state(const ArrayGeometry &geometry, int channels, const OptimizerConfig &config);

/// One heavy-ball update on a given batch:
///   v <- drag * v - step * grad(Phi),  Phi <- Phi + v,
/// then column renormalization of Phi on the configured schedule.
OptimizerState step_on_batch(const ArrayGeometry &geometry, OptimizerState state, const AngleBatch &batch,
                             const OptimizerConfig &config);

/// Samples a fresh batch from state.rng and applies step_on_batch.
/// Throws std::logic_error once config.iterations steps have been taken.
OptimizerState step(const ArrayGeometry &geometry, OptimizerState state, const OptimizerConfig &config);

struct DesignTrace
{
    OptimizerConfig config;
    int channels = 0;
    /// (iteration, batch cost of that iteration's batch before the update)
    std::vector<std::pair<int, double>> costs;
    CombiningMatrix phi;
};

/// Runs config.iterations online SGD steps and returns the column-normalized
/// result. Rejects channels > N.
DesignTrace design(const ArrayGeometry &geometry, int channels, const OptimizerConfig &config);

} // namespace arrayforge
