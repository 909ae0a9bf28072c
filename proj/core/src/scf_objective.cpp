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

#include "arrayforge/scf_objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "arrayforge/parallel.hpp"

namespace arrayforge
{

namespace
{
void require_compatible(const ArrayGeometry &geometry, const CombiningMatrix &phi)
{
    if (static_cast<std::size_t>(phi.cols()) != geometry.element_count())
        throw std::invalid_argument("combining matrix has " + std::to_string(phi.cols()) +
                                    " columns but the array has " + std::to_string(geometry.element_count()) +
                                    " elements");
}

// G_Phi - I, the only way any SCF discrepancy depends on Phi.
cmat gram_defect(const CombiningMatrix &phi)
{
    cmat h = phi.gram();
    h.diagonal().array() -= 1.0;
    return h;
}
} // namespace

CombiningMatrix::CombiningMatrix(cmat entries) : entries_(std::move(entries))
{
    if (entries_.rows() < 1 || entries_.rows() > entries_.cols())
        throw std::invalid_argument("CombiningMatrix: shape " + std::to_string(entries_.rows()) + "x" +
                                    std::to_string(entries_.cols()) + " violates 1 <= M <= N");
    if (!entries_.allFinite())
        throw std::invalid_argument("CombiningMatrix: entries must be finite");
}

CombiningMatrix CombiningMatrix::identity(std::size_t n)
{
    const auto dim = static_cast<Eigen::Index>(n);
    return CombiningMatrix(cmat::Identity(dim, dim));
}

cmat CombiningMatrix::gram() const
{
    return entries_.adjoint() * entries_;
}

void CombiningMatrix::normalize_columns()
{
    for (Eigen::Index c = 0; c < entries_.cols(); ++c)
    {
        const double norm = entries_.col(c).norm();
        if (norm > 0.0)
            entries_.col(c) /= norm;
    }
}

bool CombiningMatrix::is_column_normalized(double tol) const
{
    for (Eigen::Index c = 0; c < entries_.cols(); ++c)
        if (std::abs(entries_.col(c).norm() - 1.0) > tol)
            return false;
    return true;
}

void ScfGrid::validate() const
{
    if (azimuth_count < 2 || elevation_count < 2)
        throw std::invalid_argument("ScfGrid: azimuth and elevation counts must be at least 2");
    if (!std::isfinite(azimuth.lo) || !std::isfinite(azimuth.hi) || !(azimuth.hi > azimuth.lo))
        throw std::invalid_argument("ScfGrid: azimuth range must satisfy lo < hi");
    if (!std::isfinite(elevation.lo) || !std::isfinite(elevation.hi) || !(elevation.hi > elevation.lo))
        throw std::invalid_argument("ScfGrid: elevation range must satisfy lo < hi");
}

std::vector<Direction> ScfGrid::points() const
{
    validate();
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(azimuth_count) * static_cast<std::size_t>(elevation_count));
    for (int i = 0; i < azimuth_count; ++i)
    {
        const double az = azimuth.lo + azimuth.width() * i / (azimuth_count - 1);
        for (int j = 0; j < elevation_count; ++j)
            out.push_back({az, elevation.lo + elevation.width() * j / (elevation_count - 1)});
    }
    return out;
}

std::complex<double> scf(const ArrayGeometry &geometry, const Direction &d1, const Direction &d2)
{
    return steering(geometry, d1).dot(steering(geometry, d2));
}

std::complex<double> effective_scf(const ArrayGeometry &geometry, const CombiningMatrix &phi, const Direction &d1,
                                   const Direction &d2)
{
    require_compatible(geometry, phi);
    const cvec c1 = phi.entries() * steering(geometry, d1);
    const cvec c2 = phi.entries() * steering(geometry, d2);
    return c1.dot(c2);
}

std::complex<double> error_e(const ArrayGeometry &geometry, const CombiningMatrix &phi, const Direction &d1,
                             const Direction &d2)
{
    require_compatible(geometry, phi);
    const cvec a1 = steering(geometry, d1);
    const cvec a2 = steering(geometry, d2);
    return a1.dot(gram_defect(phi) * a2);
}

cmat error_matrix(const ArrayGeometry &geometry, const CombiningMatrix &phi, const AngleBatch &batch)
{
    require_compatible(geometry, phi);
    const cmat a = steering_batch(geometry, batch.dirs);
    return a.adjoint() * (gram_defect(phi) * a);
}

double batch_cost(const ArrayGeometry &geometry, const CombiningMatrix &phi, std::span<const AngleBatch> batches)
{
    if (batches.empty())
        throw std::invalid_argument("batch_cost: at least one angle batch is required");
    double total = 0.0;
    for (const auto &batch : batches)
    {
        if (batch.dirs.empty())
            throw std::invalid_argument("batch_cost: angle batch must contain at least one direction");
        const double l = static_cast<double>(batch.dirs.size());
        total += error_matrix(geometry, phi, batch).squaredNorm() / (l * l);
    }
    return total / static_cast<double>(batches.size());
}

double grid_scf_error(const ArrayGeometry &geometry, const CombiningMatrix &phi, const ScfGrid &grid, int jobs,
                      Eigen::Index panel_width)
{
    require_compatible(geometry, phi);
    if (panel_width < 1)
        throw std::invalid_argument("grid_scf_error: panel width must be positive");

    const auto dirs = grid.points();
    const cmat a = steering_batch(geometry, dirs);
    const cmat defect_a = gram_defect(phi) * a;
    const Eigen::Index points = a.cols();
    const Eigen::Index panels = (points + panel_width - 1) / panel_width;

    std::vector<double> partial(static_cast<std::size_t>(panels), 0.0);
    parallel_for(partial.size(), jobs, [&](std::size_t p) {
        const Eigen::Index start = static_cast<Eigen::Index>(p) * panel_width;
        const Eigen::Index width = std::min(panel_width, points - start);
        const cmat block = a.adjoint() * defect_a.middleCols(start, width);
        partial[p] = block.squaredNorm();
    });
    return pairwise_sum(std::move(partial));
}

} // namespace arrayforge
