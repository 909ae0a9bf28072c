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

#include "arrayforge/sgd_designer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arrayforge
{

namespace
{
void require_range(const AngleRange &range, const char *name)
{
    if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.hi < range.lo)
        throw std::invalid_argument(std::string("OptimizerConfig: ") + name + " range must be finite with lo <= hi");
}

double uniform_in(const AngleRange &range, Rng &rng)
{
    return range.lo + range.width() * std::generate_canonical<double, 53>(rng);
}
} // namespace

void OptimizerConfig::validate() const
{
    if (iterations < 0)
        throw std::invalid_argument("OptimizerConfig: iterations must be non-negative");
    if (batch_size < 1)
        throw std::invalid_argument("OptimizerConfig: batch_size must be positive");
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw std::invalid_argument("OptimizerConfig: step_size must be positive");
    if (!(drag >= 0.0 && drag < 1.0))
        throw std::invalid_argument("OptimizerConfig: drag must lie in [0, 1)");
    if (renormalize_every < 1)
        throw std::invalid_argument("OptimizerConfig: renormalize_every must be positive");
    if (record_every < 1)
        throw std::invalid_argument("OptimizerConfig: record_every must be positive");
    require_range(azimuth, "azimuth");
    require_range(elevation, "elevation");
}

cmat gradient(const ArrayGeometry &geometry, const CombiningMatrix &phi, const AngleBatch &batch,
              GradientScaling scaling)
{
    if (static_cast<std::size_t>(phi.cols()) != geometry.element_count())
        throw std::invalid_argument("gradient: combining matrix columns do not match the array size");
    if (batch.dirs.empty())
        throw std::invalid_argument("gradient: angle batch must contain at least one direction");

    const cmat a = steering_batch(geometry, batch.dirs);
    const cmat p = a * a.adjoint();
    cmat defect = phi.gram();
    defect.diagonal().array() -= 1.0;

    // 4 Phi P G P - 4 Phi P P, with the common factor pulled out
    cmat grad = 4.0 * (phi.entries() * p) * (defect * p);
    if (scaling == GradientScaling::normalized)
    {
        const double l = static_cast<double>(batch.dirs.size());
        grad /= l * l;
    }
    return grad;
}

AngleBatch sample_batch(const OptimizerConfig &config, Rng &rng, std::int64_t index)
{
    AngleBatch batch;
    batch.index = index;
    batch.dirs.reserve(static_cast<std::size_t>(config.batch_size));
    for (int l = 0; l < config.batch_size; ++l)
    {
        const double az = uniform_in(config.azimuth, rng);
        const double el = uniform_in(config.elevation, rng);
        batch.dirs.push_back({az, el});
    }
    return batch;
}

CombiningMatrix random_gaussian_phi(int rows, int cols, std::uint64_t seed)
{
    if (rows < 1 || cols < 1 || rows > cols)
        throw std::invalid_argument("random_gaussian_phi: need 1 <= M <= N, got M=" + std::to_string(rows) +
                                    " N=" + std::to_string(cols));
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    cmat entries(rows, cols);
    for (Eigen::Index c = 0; c < entries.cols(); ++c)
        for (Eigen::Index r = 0; r < entries.rows(); ++r)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            entries(r, c) = {re, im};
        }
    CombiningMatrix phi(std::move(entries));
    phi.normalize_columns();
    return phi;
}

OptimizerState initial_state(const ArrayGeometry &geometry, int channels, const OptimizerConfig &config)
{
    config.validate();
    const int n = static_cast<int>(geometry.element_count());
    if (channels < 1 || channels > n)
        throw std::invalid_argument("design: channel count " + std::to_string(channels) + " must lie in [1, " +
                                    std::to_string(n) + "]");

    OptimizerState state;
    state.phi = random_gaussian_phi(channels, n, config.seed);
    state.velocity = cmat::Zero(channels, n);
    state.iteration = 0;
    std::seed_seq stream{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                         static_cast<std::uint32_t>(config.seed >> 32), 1u};
    state.rng.seed(stream);
    return state;
}

OptimizerState step_on_batch(const ArrayGeometry &geometry, OptimizerState state, const AngleBatch &batch,
                             const OptimizerConfig &config)
{
    if (state.iteration >= config.iterations)
        throw std::logic_error("step: optimizer already finished " + std::to_string(config.iterations) +
                               " iterations");
    if (state.velocity.rows() != state.phi.rows() || state.velocity.cols() != state.phi.cols())
        throw std::invalid_argument("step: velocity shape does not match the combining matrix");

    const cmat grad = gradient(geometry, state.phi, batch);
    state.velocity = config.drag * state.velocity - config.step_size * grad;

    CombiningMatrix next(state.phi.entries() + state.velocity);
    if (state.iteration % config.renormalize_every == 0)
        next.normalize_columns();
    state.phi = std::move(next);
    ++state.iteration;
    return state;
}

OptimizerState step(const ArrayGeometry &geometry, OptimizerState state, const OptimizerConfig &config)
{
    if (state.iteration >= config.iterations)
        throw std::logic_error("step: optimizer already finished " + std::to_string(config.iterations) +
                               " iterations");
    const AngleBatch batch = sample_batch(config, state.rng, state.iteration);
    return step_on_batch(geometry, std::move(state), batch, config);
}

DesignTrace design(const ArrayGeometry &geometry, int channels, const OptimizerConfig &config)
{
    OptimizerState state = initial_state(geometry, channels, config);

    DesignTrace trace;
    trace.config = config;
    trace.channels = channels;
    trace.costs.reserve(static_cast<std::size_t>(config.iterations / config.record_every + 1));

    while (state.iteration < config.iterations)
    {
        const AngleBatch batch = sample_batch(config, state.rng, state.iteration);
        if (state.iteration % config.record_every == 0)
            trace.costs.emplace_back(state.iteration, batch_cost(geometry, state.phi, std::span(&batch, 1)));
        state = step_on_batch(geometry, std::move(state), batch, config);
    }

    trace.phi = std::move(state.phi);
    trace.phi.normalize_columns();
    return trace;
}

} // namespace arrayforge
