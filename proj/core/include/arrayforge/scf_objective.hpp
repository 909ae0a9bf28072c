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
#include <span>
#include <vector>

#include "arrayforge/array_model.hpp"

namespace arrayforge
{

/// M x N analog combining network (M channels, N elements), 1 <= M <= N.
class CombiningMatrix
{
public:
    CombiningMatrix() = default;

    /// Throws std::invalid_argument when the shape violates 1 <= M <= N or
    /// an entry is not finite.
    explicit CombiningMatrix(cmat entries);

    static CombiningMatrix identity(std::size_t n);

    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    const cmat &entries() const { return entries_; }

    /// G = Phi^H Phi (N x N).
    cmat gram() const;

    /// Scales every column to unit Euclidean norm. Zero columns stay zero.
    void normalize_columns();

    bool is_column_normalized(double tol = 1e-10) const;

private:
    cmat entries_;
};

/// One draw of L directions; `index` is the iteration it belongs to.
struct AngleBatch
{
    std::vector<Direction> dirs;
    std::int64_t index = 0;
};

struct AngleRange
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

/// Regular azimuth x polar-elevation grid with inclusive end points.
struct ScfGrid
{
    int azimuth_count = 121;
    int elevation_count = 61;
    AngleRange azimuth{-3.14159265358979323846, 3.14159265358979323846};
    AngleRange elevation{0.0, 3.14159265358979323846};

    /// Throws std::invalid_argument for counts < 2 or degenerate ranges.
    void validate() const;

    /// Azimuth-major enumeration: point (i, j) at index i * elevation_count + j.
    std::vector<Direction> points() const;
};

std::complex<double> scf(const ArrayGeometry &geometry, const Direction &d1, const Direction &d2);

std::complex<double> effective_scf(const ArrayGeometry &geometry, const CombiningMatrix &phi,
                                   const Direction &d1, const Direction &d2);

/// effective_scf - scf at the same pair of directions.
std::complex<double> error_e(const ArrayGeometry &geometry, const CombiningMatrix &phi,
                             const Direction &d1, const Direction &d2);

/// E = A^H G A - A^H A for A = steering_batch(batch) (L x L, Hermitian).
cmat error_matrix(const ArrayGeometry &geometry, const CombiningMatrix &phi, const AngleBatch &batch);

/// (1 / (K L^2)) sum_k ||E_k||_F^2. Batches may differ in size; each is
/// normalized by its own L^2.
double batch_cost(const ArrayGeometry &geometry, const CombiningMatrix &phi, std::span<const AngleBatch> batches);

/// Unweighted sum of |e|^2 over all ordered pairs of grid points. The
/// pair matrix is accumulated in column panels of `panel_width` points, and
/// panel partial sums are reduced pairwise, so the result does not depend on
/// `jobs`.
double grid_scf_error(const ArrayGeometry &geometry, const CombiningMatrix &phi, const ScfGrid &grid,
                      int jobs = 1, Eigen::Index panel_width = 512);

} // namespace arrayforge
