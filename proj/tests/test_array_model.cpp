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
#include <set>

#include "arrayforge/array_model.hpp"
#include "arrayforge/serialization.hpp"
#include "oracles.hpp"

using namespace arrayforge;

namespace
{
// Central finite differences of steering() in azimuth and elevation.
SteeringDerivative fd_derivative(const ArrayGeometry &g, const Direction &d, double h = 1e-6)
{
    SteeringDerivative fd;
    fd.d_azimuth = (steering(g, {d.azimuth + h, d.elevation}) - steering(g, {d.azimuth - h, d.elevation})) / (2 * h);
    fd.d_elevation = (steering(g, {d.azimuth, d.elevation + h}) - steering(g, {d.azimuth, d.elevation - h})) / (2 * h);
    return fd;
}

double relative_inf(const cvec &approx, const cvec &exact)
{
    return (approx - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
}
} // namespace

TEST_CASE("make_suca: reference array layout")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    REQUIRE(g.element_count() == 33);

    std::set<double> heights;
    for (Eigen::Index n = 0; n < 33; ++n)
    {
        const auto p = g.positions().col(n);
        heights.insert(p.z());
        CHECK(std::hypot(p.x(), p.y()) == Catch::Approx(0.68).margin(1e-14));
        // stack-major: element n belongs to stack n / 11
        CHECK(p.z() == Catch::Approx(0.5 * static_cast<double>(n / 11)).margin(1e-14));
    }
    CHECK(heights == std::set<double>{0.0, 0.5, 1.0});
}

TEST_CASE("make_suca: degenerate single element at the origin")
{
    const auto g = make_suca(1, 1, 0.5, 0.0);
    REQUIRE(g.element_count() == 1);
    CHECK(g.positions().col(0).norm() == 0.0);
}

TEST_CASE("make_suca: within-stack distances follow the chord formula")
{
    const auto g = make_suca(2, 4, 0.25, 0.5);
    REQUIRE(g.element_count() == 8);
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
            {
                const double dist = (g.positions().col(s * 4 + i) - g.positions().col(s * 4 + j)).norm();
                const int k = std::abs(i - j);
                CHECK(dist == Catch::Approx(2 * 0.5 * std::sin(std::numbers::pi * k / 4)).margin(1e-14));
            }
}

TEST_CASE("make_suca: rejects non-positive dimensions")
{
    CHECK_THROWS_AS(make_suca(0, 11, 0.5, 0.68), std::invalid_argument);
    CHECK_THROWS_AS(make_suca(3, 0, 0.5, 0.68), std::invalid_argument);
    CHECK_THROWS_AS(make_suca(3, 11, 0.0, 0.68), std::invalid_argument);
    CHECK_THROWS_AS(make_suca(3, 11, -0.5, 0.68), std::invalid_argument);
    CHECK_THROWS_AS(make_suca(3, 11, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("ArrayGeometry: rejects empty and non-finite layouts")
{
    CHECK_THROWS_AS(ArrayGeometry(Eigen::Matrix3Xd(3, 0)), std::invalid_argument);
    Eigen::Matrix3Xd bad = Eigen::Matrix3Xd::Zero(3, 2);
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(ArrayGeometry(bad), std::invalid_argument);
}

TEST_CASE("steering: unit magnitude, self-correlation and periodicity")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> az(-10.0, 10.0), el(0.0, std::numbers::pi);
    for (int trial = 0; trial < 200; ++trial)
    {
        const Direction d{az(rng), el(rng)};
        const cvec a = steering(g, d);
        CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-12);
        CHECK(std::abs(a.squaredNorm() - 33.0) / 33.0 <= 1e-10);
        CHECK((steering(g, {d.azimuth + 2 * std::numbers::pi, d.elevation}) - a).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("steering: matches element-wise formula")
{
    std::mt19937_64 rng(3);
    const auto g = oracle::random_geometry(7, rng);
    const Direction d{0.7, 1.1};
    const cvec a = steering(g, d);
    const auto ref = oracle::steering(g, d);
    for (std::size_t n = 0; n < ref.size(); ++n)
        CHECK(std::abs(a[static_cast<Eigen::Index>(n)] - ref[n]) <= 1e-13);
}

TEST_CASE("steering: single element at origin is [1]")
{
    const auto g = make_suca(1, 1, 0.5, 0.0);
    const cvec a = steering(g, {1.3, 0.4});
    REQUIRE(a.size() == 1);
    CHECK(a[0] == std::complex<double>(1.0, 0.0));
}

TEST_CASE("steering_batch: columns equal steering()")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    std::mt19937_64 rng(11);
    const auto batch = oracle::random_batch(250, rng);
    const cmat a = steering_batch(g, batch.dirs);
    REQUIRE(a.rows() == 33);
    REQUIRE(a.cols() == 250);
    CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-12);
    for (Eigen::Index l = 0; l < a.cols(); l += 37)
        CHECK(a.col(l) == steering(g, batch.dirs[static_cast<std::size_t>(l)]));

    const cmat gram = a.adjoint() * a;
    CHECK((gram.diagonal().array() - 33.0).abs().maxCoeff() <= 1e-10);

    const std::vector<Direction> one{{0.2, 0.9}};
    CHECK(steering_batch(g, one).col(0) == steering(g, one[0]));
}

TEST_CASE("steering_derivative: single element has zero derivatives")
{
    const auto g = make_suca(1, 1, 0.5, 0.0);
    const auto d = steering_derivative(g, {0.4, 1.2});
    CHECK(d.d_azimuth[0] == std::complex<double>(0.0, 0.0));
    CHECK(d.d_elevation[0] == std::complex<double>(0.0, 0.0));
}

TEST_CASE("steering_derivative: horizon, bottom stack has no elevation term")
{
    const auto g = make_suca(3, 11, 0.5, 0.68);
    for (double az : {0.0, 0.3, 2.0, -1.7})
    {
        const Direction dir{az, std::numbers::pi / 2};
        const auto an = steering_derivative(g, dir);
        const auto fd = fd_derivative(g, dir);
        for (Eigen::Index n = 0; n < 11; ++n)
        {
            CHECK(std::abs(an.d_elevation[n]) <= 1e-12);
            CHECK(std::abs(fd.d_elevation[n]) <= 1e-8);
        }
        for (Eigen::Index n = 11; n < 33; ++n)
            CHECK(std::abs(fd.d_elevation[n] - an.d_elevation[n]) / std::abs(an.d_elevation[n]) <= 1e-6);
        CHECK(relative_inf(fd.d_azimuth, an.d_azimuth) <= 1e-6);
    }
}

TEST_CASE("steering_derivative: agrees with finite differences on random arrays")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(2, 40);
    std::uniform_real_distribution<double> az(-std::numbers::pi, std::numbers::pi), el(0.05, std::numbers::pi - 0.05);
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto g = oracle::random_geometry(size(rng), rng, 2.0);
        const Direction dir{az(rng), el(rng)};
        const auto an = steering_derivative(g, dir);
        const auto fd = fd_derivative(g, dir);
        CHECK(relative_inf(fd.d_azimuth, an.d_azimuth) <= 1e-6);
        CHECK(relative_inf(fd.d_elevation, an.d_elevation) <= 1e-6);
    }
}

TEST_CASE("steering_derivative: azimuth mirror flips the azimuth derivative")
{
    std::mt19937_64 rng(5);
    const auto g = oracle::random_geometry(9, rng);
    Eigen::Matrix3Xd mirrored = g.positions();
    mirrored.row(1) *= -1.0;
    const ArrayGeometry gm(mirrored);

    const Direction dir{0.8, 1.0};
    const auto d = steering_derivative(g, dir);
    const auto dm = steering_derivative(gm, {-dir.azimuth, dir.elevation});
    CHECK((dm.d_azimuth + d.d_azimuth).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((dm.d_elevation - d.d_elevation).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("geometry JSON round trip")
{
    const auto g = make_suca(2, 5, 0.5, 0.3);
    const json j = g;
    const auto back = geometry_from_json(j);
    CHECK(back.positions() == g.positions());
    CHECK_THROWS_AS(geometry_from_json(json{{"positions", {{1.0, 2.0}}}}), std::invalid_argument);
}
