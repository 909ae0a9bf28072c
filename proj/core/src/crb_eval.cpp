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

#include "arrayforge/crb_eval.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "arrayforge/parallel.hpp"

namespace arrayforge
{

namespace
{
// lambda_max / lambda_min of a Hermitian positive semi-definite matrix;
// infinity when the smallest eigenvalue is not positive.
template <typename Matrix>
double hermitian_condition(const Matrix &m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    const auto &ev = eig.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    if (!(lo > 0.0))
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}
} // namespace

CrbTerms crb_terms(const ArrayGeometry &geometry, const CrbScenario &scenario)
{
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    const auto s = static_cast<Eigen::Index>(scenario.sources.size());
    if (s < 1)
        throw std::invalid_argument("crb: at least one source is required");
    if (!(scenario.noise_variance > 0.0) || !std::isfinite(scenario.noise_variance))
        throw std::invalid_argument("crb: noise variance must be positive");
    if (scenario.amplitudes.size() != 0 && scenario.amplitudes.size() != s)
        throw std::invalid_argument("crb: amplitude vector length must equal the number of sources");
    if (scenario.amplitudes.size() != 0 &&
        (!scenario.amplitudes.allFinite() || scenario.amplitudes.isZero(0.0)))
        throw std::invalid_argument("crb: amplitudes must be finite and not all zero");
    if (scenario.phi && scenario.phi->cols() != n)
        throw std::invalid_argument("crb: combining matrix columns do not match the array size");

    cmat a(n, s), da(n, 2 * s);
    for (Eigen::Index k = 0; k < s; ++k)
    {
        const auto &dir = scenario.sources[static_cast<std::size_t>(k)];
        a.col(k) = steering(geometry, dir);
        const auto deriv = steering_derivative(geometry, dir);
        da.col(k) = deriv.d_azimuth;
        da.col(s + k) = deriv.d_elevation;
    }

    CrbTerms t;
    if (scenario.phi)
    {
        t.g = scenario.phi->entries() * a;
        t.d = scenario.phi->entries() * da;
    }
    else
    {
        t.g = std::move(a);
        t.d = std::move(da);
    }

    const cmat gg = t.g.adjoint() * t.g;
    t.gram_condition = hermitian_condition(gg);
    if (!(t.gram_condition <= crb_condition_limit))
        throw RankDeficientSteering(
            fmt::format("crb: rank-deficient steering (condition of G^H G = {:.3g})", t.gram_condition),
            t.gram_condition);

    const Eigen::Index m = t.g.rows();
    t.projector = cmat::Identity(m, m) - t.g * gg.ldlt().solve(t.g.adjoint());

    const cvec x = scenario.amplitudes.size() == 0 ? cvec(cvec::Ones(s)) : scenario.amplitudes;
    const cmat r = x * x.adjoint();
    cmat weight(2 * s, 2 * s);
    weight << r, r, r, r;
    t.fim = (t.d.adjoint() * t.projector * t.d).cwiseProduct(weight.transpose()).real();
    return t;
}

CrbResult crb(const ArrayGeometry &geometry, const CrbScenario &scenario)
{
    const CrbTerms t = crb_terms(geometry, scenario);
    const Eigen::MatrixXd fim = 0.5 * (t.fim + t.fim.transpose());

    CrbResult result;
    result.fim_condition = hermitian_condition(fim);
    if (!(result.fim_condition <= crb_condition_limit))
        throw UnidentifiableScenario(
            fmt::format("crb: unidentifiable scenario (Fisher matrix condition = {:.3g})", result.fim_condition),
            result.fim_condition);

    const Eigen::LLT<Eigen::MatrixXd> llt(fim);
    if (llt.info() != Eigen::Success)
        throw UnidentifiableScenario("crb: unidentifiable scenario (Fisher matrix not positive definite)",
                                     result.fim_condition);
    const Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(fim.rows(), fim.cols()));
    result.trace_value = 0.5 * scenario.noise_variance * inverse.trace();
    return result;
}

const char *to_string(CrbMapKind kind)
{
    switch (kind)
    {
    case CrbMapKind::single:
        return "single";
    case CrbMapKind::azimuth_pair:
        return "azimuth-pair";
    case CrbMapKind::elevation_pair:
        return "elevation-pair";
    }
    return "unknown";
}

CrbMapKind crb_map_kind_from_string(const std::string &name)
{
    for (auto kind : {CrbMapKind::single, CrbMapKind::azimuth_pair, CrbMapKind::elevation_pair})
        if (name == to_string(kind))
            return kind;
    throw std::invalid_argument("unknown CRB map kind '" + name + "'");
}

const char *to_string(CellStatus status)
{
    switch (status)
    {
    case CellStatus::ok:
        return "ok";
    case CellStatus::absent:
        return "absent";
    case CellStatus::rank_deficient:
        return "rank_deficient";
    case CellStatus::unidentifiable:
        return "unidentifiable";
    }
    return "unknown";
}

CrbMap crb_map(const ArrayGeometry &geometry, const std::optional<CombiningMatrix> &phi, const ScfGrid &grid,
               CrbMapKind kind, double separation, double noise_variance, int jobs)
{
    if (kind != CrbMapKind::single && !(separation > 0.0))
        throw std::invalid_argument("crb_map: pair scenarios need a positive separation");
    if (phi && static_cast<std::size_t>(phi->cols()) != geometry.element_count())
        throw std::invalid_argument("crb_map: combining matrix columns do not match the array size");

    CrbMap map;
    map.grid = grid;
    map.kind = kind;
    map.separation = kind == CrbMapKind::single ? 0.0 : separation;
    map.noise_variance = noise_variance;

    const auto points = grid.points();
    map.cells.resize(points.size());

    parallel_for(points.size(), jobs, [&](std::size_t i) {
        CrbCell &cell = map.cells[i];
        cell.source = points[i];
        cell.value = std::numeric_limits<double>::quiet_NaN();

        CrbScenario scenario;
        scenario.noise_variance = noise_variance;
        scenario.phi = phi;
        scenario.sources.push_back(points[i]);
        if (kind == CrbMapKind::azimuth_pair)
        {
            const double two_pi = 2.0 * std::numbers::pi;
            double az = std::fmod(points[i].azimuth + separation, two_pi);
            if (az < 0.0)
                az += two_pi;
            scenario.sources.push_back({az, points[i].elevation});
        }
        else if (kind == CrbMapKind::elevation_pair)
        {
            const double el = points[i].elevation + separation;
            if (el < 0.0 || el > std::numbers::pi)
            {
                cell.status = CellStatus::absent;
                return;
            }
            scenario.sources.push_back({points[i].azimuth, el});
        }

        try
        {
            cell.value = crb(geometry, scenario).trace_value;
            cell.status = CellStatus::ok;
        }
        catch (const RankDeficientSteering &)
        {
            cell.status = CellStatus::rank_deficient;
        }
        catch (const UnidentifiableScenario &)
        {
            cell.status = CellStatus::unidentifiable;
        }
    });
    return map;
}

} // namespace arrayforge
