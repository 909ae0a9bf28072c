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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "arrayforge/serialization.hpp"
#include "arrayforge/sgd_designer.hpp"
#include "oracles.hpp"

using namespace arrayforge;

namespace
{
double single_batch_cost(const ArrayGeometry &g, const CombiningMatrix &phi, const AngleBatch &b)
{
    return batch_cost(g, phi, std::span(&b, 1));
}

double max_relative(const cmat &approx, const cmat &exact)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < exact.size(); ++i)
        worst = std::max(worst, std::abs(approx(i) - exact(i)) / std::abs(exact(i)));
    return worst;
}

OptimizerState state_from(const CombiningMatrix &phi)
{
    OptimizerState s;
    s.phi = phi;
    s.velocity = cmat::Zero(phi.rows(), phi.cols());
    return s;
}
} // namespace

TEST_CASE("gradient: zero when the Gramian is the identity")
{
    std::mt19937_64 rng(1);
    const auto g = make_suca(2, 4, 0.5, 0.4);
    const auto batch = oracle::random_batch(6, rng);
    CHECK(gradient(g, CombiningMatrix::identity(8), batch).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oracle::max_abs(gradient(g, CombiningMatrix(oracle::random_unitary(8, rng)), batch)) <= 1e-12);
}

TEST_CASE("gradient: central differences of the normalized batch cost")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> nd(1, 8), ld(1, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial)
    {
        const int n = nd(rng);
        const int m = std::uniform_int_distribution<int>(1, std::min(4, n))(rng);
        const auto g = oracle::random_geometry(n, rng);
        const CombiningMatrix phi(oracle::random_complex(m, n, rng));
        const auto batch = oracle::random_batch(ld(rng), rng);

        const cmat analytic = gradient(g, phi, batch);
        const cmat fd = oracle::finite_difference_gradient(
            phi, [&](const CombiningMatrix &p) { return single_batch_cost(g, p, batch); });
        worst = std::max(worst, max_relative(fd, analytic));
    }
    INFO("worst entrywise relative error " << worst);
    CHECK(worst <= 1e-6);
}

TEST_CASE("gradient: unnormalized mode differentiates the raw Frobenius norm")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto g = oracle::random_geometry(6, rng);
        const CombiningMatrix phi(oracle::random_complex(3, 6, rng));
        const auto batch = oracle::random_batch(4, rng);
        const cmat analytic = gradient(g, phi, batch, GradientScaling::unnormalized);
        const cmat fd = oracle::finite_difference_gradient(
            phi, [&](const CombiningMatrix &p) { return error_matrix(g, p, batch).squaredNorm(); });
        CHECK(max_relative(fd, analytic) <= 1e-6);
        CHECK(oracle::max_abs(analytic / 16.0 - gradient(g, phi, batch)) <= 1e-12 * oracle::max_abs(analytic));
    }
}

TEST_CASE("gradient: hand-expanded scalar instance")
{
    // One element, one channel, one direction: cost = (phi^2 - 1)^2,
    // d cost / d phi = 4 phi (phi^2 - 1).
    const auto g = make_suca(1, 1, 0.5, 0.0);
    const AngleBatch batch{{{0.4, 1.3}}, 0};
    for (double phi : {0.3, 0.7, 1.0, 1.8})
    {
        const cmat grad = gradient(g, CombiningMatrix(cmat::Constant(1, 1, phi)), batch);
        CHECK(grad(0, 0).real() == Catch::Approx(4.0 * phi * (phi * phi - 1.0)).margin(1e-14));
        CHECK(grad(0, 0).imag() == 0.0);
    }
}

TEST_CASE("gradient: dimension mismatch")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    std::mt19937_64 rng(2);
    CHECK_THROWS_AS(gradient(g, CombiningMatrix(cmat::Ones(2, 8)), oracle::random_batch(3, rng)),
                    std::invalid_argument);
}

TEST_CASE("OptimizerConfig: validation")
{
    OptimizerConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.iterations == 5000);
    CHECK(c.batch_size == 250);
    CHECK(c.step_size == 1e-2);
    CHECK(c.drag == 0.1);

    auto bad = c;
    bad.drag = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.step_size = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.batch_size = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.elevation = {2.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sample_batch: determinism, degenerate range, law of large numbers")
{
    OptimizerConfig c;
    Rng a(17), b(17);
    for (int k = 0; k < 3; ++k)
    {
        const auto ba = sample_batch(c, a, k), bb = sample_batch(c, b, k);
        REQUIRE(ba.dirs.size() == 250);
        for (std::size_t i = 0; i < ba.dirs.size(); ++i)
        {
            CHECK(ba.dirs[i].azimuth == bb.dirs[i].azimuth);
            CHECK(ba.dirs[i].elevation == bb.dirs[i].elevation);
        }
    }

    auto fixed = c;
    fixed.azimuth = {1.25, 1.25};
    fixed.elevation = {0.5, 0.5};
    for (const auto &d : sample_batch(fixed, a).dirs)
    {
        CHECK(d.azimuth == 1.25);
        CHECK(d.elevation == 0.5);
    }

    auto big = c;
    big.batch_size = 100000;
    Rng rng(5);
    const auto batch = sample_batch(big, rng);
    double az = 0.0, el = 0.0;
    for (const auto &d : batch.dirs)
    {
        CHECK(d.azimuth >= 0.0);
        CHECK(d.azimuth <= 2 * std::numbers::pi);
        CHECK(d.elevation >= std::numbers::pi / 4);
        CHECK(d.elevation <= 3 * std::numbers::pi / 4);
        az += d.azimuth;
        el += d.elevation;
    }
    const double n = static_cast<double>(batch.dirs.size());
    const double sigma_az = 2 * std::numbers::pi / std::sqrt(12.0);
    const double sigma_el = (std::numbers::pi / 2) / std::sqrt(12.0);
    CHECK(std::abs(az / n - std::numbers::pi) <= 3 * sigma_az / std::sqrt(n));
    CHECK(std::abs(el / n - std::numbers::pi / 2) <= 3 * sigma_el / std::sqrt(n));
}

TEST_CASE("random_gaussian_phi: normalization, reproducibility, Gramian statistics")
{
    const auto a = random_gaussian_phi(13, 33, 42);
    CHECK(a.is_column_normalized(1e-10));
    CHECK(a.entries() == random_gaussian_phi(13, 33, 42).entries());
    CHECK(a.entries() != random_gaussian_phi(13, 33, 43).entries());
    CHECK_THROWS_AS(random_gaussian_phi(34, 33, 0), std::invalid_argument);

    // |<u, v>|^2 ~ Beta(1, M - 1) for independent unit vectors in C^M, so
    // E|<u, v>| = Gamma(3/2) Gamma(M) / Gamma(M + 1/2).
    const int m = 64;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const cmat gram = random_gaussian_phi(m, m, seed).gram();
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
                if (p != q)
                {
                    sum += std::abs(gram(p, q));
                    ++count;
                }
    }
    const double mean = sum / static_cast<double>(count);
    const double exact = std::exp(std::lgamma(1.5) + std::lgamma(m) - std::lgamma(m + 0.5));
    CHECK(std::abs(mean - 1.0 / std::sqrt(m)) <= 0.2 / std::sqrt(m));
    CHECK(std::abs(mean - exact) <= 0.01 * exact);
}

TEST_CASE("step: stationary point only renormalizes")
{
    std::mt19937_64 rng(3);
    const auto g = make_suca(2, 3, 0.5, 0.4);
    OptimizerConfig c;
    const CombiningMatrix u(oracle::random_unitary(6, rng));
    const auto next = step_on_batch(g, state_from(u), oracle::random_batch(5, rng), c);
    CHECK(oracle::max_abs(next.phi.entries() - u.entries()) <= 1e-12);
    CHECK(next.iteration == 1);
}

TEST_CASE("step: zero drag is plain projected SGD")
{
    std::mt19937_64 rng(4);
    const auto g = oracle::random_geometry(6, rng);
    OptimizerConfig c;
    c.drag = 0.0;
    c.step_size = 3e-3;
    const auto phi0 = random_gaussian_phi(3, 6, 1);
    const auto batch = oracle::random_batch(5, rng);

    CombiningMatrix expected(phi0.entries() - c.step_size * gradient(g, phi0, batch));
    expected.normalize_columns();
    const auto next = step_on_batch(g, state_from(phi0), batch, c);
    CHECK(oracle::max_abs(next.phi.entries() - expected.entries()) <= 1e-14);
}

TEST_CASE("step: two momentum iterations unrolled by hand")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    OptimizerConfig c;
    c.drag = 0.5;
    c.batch_size = 20;
    c.iterations = 2;
    c.seed = 77;

    OptimizerState state = initial_state(g, 5, c);
    Rng replay = state.rng;
    const CombiningMatrix phi0 = state.phi;
    state = step(g, std::move(state), c);
    state = step(g, std::move(state), c);
    CHECK_THROWS_AS(step(g, state, c), std::logic_error);

    const auto b0 = sample_batch(c, replay, 0);
    const auto b1 = sample_batch(c, replay, 1);
    const cmat g0 = gradient(g, phi0, b0);
    const cmat v1 = -c.step_size * g0;
    CombiningMatrix phi1(phi0.entries() + v1);
    phi1.normalize_columns();
    const cmat g1 = gradient(g, phi1, b1);
    const cmat v2 = c.drag * v1 - c.step_size * g1;
    CombiningMatrix phi2(phi1.entries() + v2);
    phi2.normalize_columns();

    CHECK(oracle::max_abs(state.velocity - v2) <= 1e-13);
    CHECK(oracle::max_abs(state.phi.entries() - phi2.entries()) <= 1e-13);
    CHECK(state.iteration == 2);
}

TEST_CASE("step: a small plain step does not increase the batch cost")
{
    std::mt19937_64 rng(606);
    OptimizerConfig c;
    c.drag = 0.0;
    c.step_size = 1e-4;
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto g = oracle::random_geometry(8, rng);
        const auto phi = random_gaussian_phi(4, 8, static_cast<std::uint64_t>(trial));
        const auto batch = oracle::random_batch(6, rng);
        const auto next = step_on_batch(g, state_from(phi), batch, c);
        CHECK(single_batch_cost(g, next.phi, batch) <= single_batch_cost(g, phi, batch));
    }
}

TEST_CASE("step: trajectory costs are invariant under a global unitary")
{
    std::mt19937_64 rng(8);
    const auto g = make_suca(2, 5, 0.5, 0.5);
    OptimizerConfig c;
    c.iterations = 6;
    const auto phi = random_gaussian_phi(4, 10, 3);
    const cmat u = oracle::random_unitary(4, rng);

    OptimizerState a = state_from(phi), b = state_from(CombiningMatrix(u * phi.entries()));
    for (int k = 0; k < c.iterations; ++k)
    {
        const auto batch = oracle::random_batch(8, rng);
        const double ca = single_batch_cost(g, a.phi, batch), cb = single_batch_cost(g, b.phi, batch);
        CHECK(std::abs(ca - cb) <= 1e-10 * ca);
        a = step_on_batch(g, std::move(a), batch, c);
        b = step_on_batch(g, std::move(b), batch, c);
    }
}

TEST_CASE("design: zero iterations returns the normalized initialization")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    OptimizerConfig c;
    c.iterations = 0;
    c.seed = 12;
    const auto trace = design(g, 13, c);
    CHECK(trace.costs.empty());
    CHECK(oracle::max_abs(trace.phi.entries() - random_gaussian_phi(13, 33, 12).entries()) <= 1e-15);
    CHECK_THROWS_AS(design(g, 34, c), std::invalid_argument);
    CHECK_THROWS_AS(design(g, 0, c), std::invalid_argument);
}

TEST_CASE("design: identical seeds give identical traces")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    OptimizerConfig c;
    c.iterations = 60;
    c.batch_size = 30;
    c.record_every = 7;
    c.seed = 5;
    const auto a = design(g, 10, c);
    const auto b = design(g, 10, c);
    REQUIRE(a.costs.size() == 9);
    CHECK(a.costs == b.costs);
    CHECK(a.phi.entries() == b.phi.entries());
    CHECK(a.phi.is_column_normalized());
    for (std::size_t i = 1; i < a.costs.size(); ++i)
        CHECK(a.costs[i].first > a.costs[i - 1].first);

    c.seed = 6;
    CHECK(design(g, 10, c).costs != a.costs);

    const json j = a;
    const auto back = j.get<DesignTrace>();
    CHECK(back.costs == a.costs);
    CHECK(back.phi.entries() == a.phi.entries());
    CHECK(back.config.seed == 5);
    CHECK(back.channels == 10);
}
