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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arrayforge
{

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

/// Plane-wave direction. `elevation` is the polar angle measured from the
/// stack (z) axis, so the horizon lies at pi/2.
struct Direction
{
    double azimuth = 0.0;
    double elevation = 0.0;
};

/// Unit propagation vector (cos az sin el, sin az sin el, cos el).
Eigen::Vector3d propagation_vector(const Direction &dir);

/// Element positions of an N-element array, in carrier wavelengths.
class ArrayGeometry
{
public:
    /// Columns are element positions. Throws std::invalid_argument for an
    /// empty array or non-finite coordinates.
    explicit ArrayGeometry(Eigen::Matrix3Xd positions);

    std::size_t element_count() const { return static_cast<std::size_t>(positions_.cols()); }
    const Eigen::Matrix3Xd &positions() const { return positions_; }

private:
    Eigen::Matrix3Xd positions_;
};

/// Stacked uniform circular array. Element (s, n) sits at
/// (R cos(2 pi n / per_stack), R sin(2 pi n / per_stack), s * spacing),
/// stack-major ordering. A zero radius is allowed.
ArrayGeometry make_suca(int stacks, int per_stack, double spacing, double radius);

/// a_n = exp(+j 2 pi <u(dir), p_n>), unit magnitude per element.
cvec steering(const ArrayGeometry &geometry, const Direction &dir);

/// N x L matrix whose column l is steering(geometry, dirs[l]).
cmat steering_batch(const ArrayGeometry &geometry, std::span<const Direction> dirs);

struct SteeringDerivative
{
    cvec d_azimuth;
    cvec d_elevation;
};

/// Analytic partial derivatives of the steering vector.
SteeringDerivative steering_derivative(const ArrayGeometry &geometry, const Direction &dir);

} // namespace arrayforge
