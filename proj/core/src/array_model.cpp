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

#include "arrayforge/array_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arrayforge
{

namespace
{
constexpr double two_pi = 2.0 * std::numbers::pi;

cvec unit_phasors(const Eigen::VectorXd &phase)
{
    cvec out(phase.size());
    for (Eigen::Index n = 0; n < phase.size(); ++n)
        out[n] = std::polar(1.0, phase[n]);
    return out;
}
} // namespace

Eigen::Vector3d propagation_vector(const Direction &dir)
{
    const double se = std::sin(dir.elevation);
    return {std::cos(dir.azimuth) * se, std::sin(dir.azimuth) * se, std::cos(dir.elevation)};
}

ArrayGeometry::ArrayGeometry(Eigen::Matrix3Xd positions) : positions_(std::move(positions))
{
    if (positions_.cols() < 1)
        throw std::invalid_argument("ArrayGeometry: array must contain at least one element");
    if (!positions_.allFinite())
        throw std::invalid_argument("ArrayGeometry: element positions must be finite");
}

ArrayGeometry make_suca(int stacks, int per_stack, double spacing, double radius)
{
    if (stacks < 1 || per_stack < 1)
        throw std::invalid_argument("make_suca: stacks and per_stack must be positive");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("make_suca: stack spacing must be positive");
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("make_suca: radius must be non-negative");

    Eigen::Matrix3Xd pos(3, stacks * per_stack);
    for (int s = 0; s < stacks; ++s)
        for (int n = 0; n < per_stack; ++n)
        {
            const double phi = two_pi * n / per_stack;
            pos.col(s * per_stack + n) << radius * std::cos(phi), radius * std::sin(phi), s * spacing;
        }
    return ArrayGeometry(std::move(pos));
}

cvec steering(const ArrayGeometry &geometry, const Direction &dir)
{
    const Eigen::VectorXd phase = two_pi * (geometry.positions().transpose() * propagation_vector(dir));
    return unit_phasors(phase);
}

cmat steering_batch(const ArrayGeometry &geometry, std::span<const Direction> dirs)
{
    const auto &pos = geometry.positions();
    cmat out(pos.cols(), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t l = 0; l < dirs.size(); ++l)
    {
        const Eigen::VectorXd phase = two_pi * (pos.transpose() * propagation_vector(dirs[l]));
        out.col(static_cast<Eigen::Index>(l)) = unit_phasors(phase);
    }
    return out;
}

SteeringDerivative steering_derivative(const ArrayGeometry &geometry, const Direction &dir)
{
    const double sa = std::sin(dir.azimuth), ca = std::cos(dir.azimuth);
    const double se = std::sin(dir.elevation), ce = std::cos(dir.elevation);
    const Eigen::Vector3d du_daz(-sa * se, ca * se, 0.0);
    const Eigen::Vector3d du_del(ca * ce, sa * ce, -se);

    const auto &pos = geometry.positions();
    const cvec a = steering(geometry, dir);
    const std::complex<double> j2pi(0.0, two_pi);

    SteeringDerivative d;
    d.d_azimuth = (j2pi * (pos.transpose() * du_daz).cast<std::complex<double>>()).cwiseProduct(a);
    d.d_elevation = (j2pi * (pos.transpose() * du_del).cast<std::complex<double>>()).cwiseProduct(a);
    return d;
}

} // namespace arrayforge
