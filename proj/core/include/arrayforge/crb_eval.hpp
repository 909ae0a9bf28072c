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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arrayforge/scf_objective.hpp"

namespace arrayforge
{

/// G^H G of the compressed source steering matrix is singular (coincident or
/// otherwise degenerate sources).
class RankDeficientSteering : public std::runtime_error
{
public:
    RankDeficientSteering(const std::string &what, double condition)
        : std::runtime_error(what), condition_(condition)
    {
    }
    double condition() const { return condition_; }

private:
    double condition_;
};

/// The angle Fisher information is singular or too ill-conditioned to invert.
class UnidentifiableScenario : public std::runtime_error
{
public:
    UnidentifiableScenario(const std::string &what, double condition)
        : std::runtime_error(what), condition_(condition)
    {
    }
    double condition() const { return condition_; }

private:
    double condition_;
};

/// Condition number above which GᴴG or the Fisher matrix is declared singular.
inline constexpr double crb_condition_limit = 1e12;

struct CrbScenario
{
    std::vector<Direction> sources;
    /// Source amplitudes x; empty means all ones.
    cvec amplitudes;
    double noise_variance = 1.0;
    /// Empty means the uncompressed array (Phi = I).
    std::optional<CombiningMatrix> phi;
};

struct CrbResult
{
    double trace_value = 0.0;
    double fim_condition = 0.0;
};

/// Intermediate quantities of the single-snapshot deterministic CRB.
struct CrbTerms
{
    cmat g;          ///< M x S compressed source steering matrix
    cmat d;          ///< M x 2S, all azimuth derivatives then all elevation derivatives
    cmat projector;  ///< I - G (G^H G)^-1 G^H
    Eigen::MatrixXd fim; ///< Re(D^H P D .* (1_2x2 kron x x^H)^T), 2S x 2S
    double gram_condition = 0.0;
};

/// Validates the scenario and assembles the terms. Throws
/// RankDeficientSteering when G^H G is singular.
CrbTerms crb_terms(const ArrayGeometry &geometry, const CrbScenario &scenario);

/// sigma^2 / 2 * tr(fim^-1). Throws UnidentifiableScenario when the Fisher
/// matrix is not positive definite or its condition exceeds crb_condition_limit.
CrbResult crb(const ArrayGeometry &geometry, const CrbScenario &scenario);

enum class CrbMapKind
{
    single,
    azimuth_pair,
    elevation_pair,
};

const char *to_string(CrbMapKind kind);
CrbMapKind crb_map_kind_from_string(const std::string &name);

enum class CellStatus
{
    ok,
    absent,         ///< second source falls outside the polar range [0, pi]
    rank_deficient,
    unidentifiable,
};

const char *to_string(CellStatus status);

struct CrbCell
{
    Direction source;
    double value = 0.0; ///< NaN unless status == ok
    CellStatus status = CellStatus::ok;
};

struct CrbMap
{
    ScfGrid grid;
    CrbMapKind kind = CrbMapKind::single;
    double separation = 0.0;
    double noise_variance = 1.0;
    std::vector<CrbCell> cells; ///< same order as grid.points()
};

/// Evaluates the CRB with source 1 at every grid point and, for pair kinds,
/// source 2 offset by `separation` in azimuth (wrapped into [0, 2pi)) or
/// polar elevation. Per-cell failures are recorded, never thrown.
CrbMap crb_map(const ArrayGeometry &geometry, const std::optional<CombiningMatrix> &phi, const ScfGrid &grid,
               CrbMapKind kind, double separation, double noise_variance, int jobs = 1);

} // namespace arrayforge
