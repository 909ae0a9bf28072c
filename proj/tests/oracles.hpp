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

// Test-only reference computations. Everything here is written with plain
// loops over elements, independent of the matrix formulations in core/.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "arrayforge/crb_eval.hpp"
#include "arrayforge/scf_objective.hpp"
#include "arrayforge/sgd_designer.hpp"

namespace oracle
{

using arrayforge::AngleBatch;
using arrayforge::ArrayGeometry;
using arrayforge::cmat;
using arrayforge::CombiningMatrix;
using arrayforge::cvec;
using arrayforge::Direction;
using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// exp(+j 2 pi (x cos az sin el + y sin az sin el + z cos el)), element by element.
inline std::vector<cplx> steering(const ArrayGeometry &g, const Direction &d)
{
    const auto &p = g.positions();
    std::vector<cplx> a(static_cast<std::size_t>(p.cols()));
    for (Eigen::Index n = 0; n < p.cols(); ++n)
    {
        const double phase = 2.0 * pi *
                             (p(0, n) * std::cos(d.azimuth) * std::sin(d.elevation) +
                              p(1, n) * std::sin(d.azimuth) * std::sin(d.elevation) + p(2, n) * std::cos(d.elevation));
        a[static_cast<std::size_t>(n)] = {std::cos(phase), std::sin(phase)};
    }
    return a;
}

inline cplx scf(const ArrayGeometry &g, const Direction &d1, const Direction &d2)
{
    const auto a1 = oracle::steering(g, d1), a2 = oracle::steering(g, d2);
    cplx s = 0.0;
    for (std::size_t n = 0; n < a1.size(); ++n)
        s += std::conj(a1[n]) * a2[n];
    return s;
}

/// sum_{p,q} conj(a1_p) (G - I)_{pq} a2_q with G_{pq} = sum_m conj(Phi_mp) Phi_mq.
inline cplx error_e(const ArrayGeometry &g, const CombiningMatrix &phi, const Direction &d1, const Direction &d2)
{
    const auto a1 = oracle::steering(g, d1), a2 = oracle::steering(g, d2);
    const cmat &f = phi.entries();
    cplx s = 0.0;
    for (Eigen::Index p = 0; p < f.cols(); ++p)
        for (Eigen::Index q = 0; q < f.cols(); ++q)
        {
            cplx gpq = 0.0;
            for (Eigen::Index m = 0; m < f.rows(); ++m)
                gpq += std::conj(f(m, p)) * f(m, q);
            if (p == q)
                gpq -= 1.0;
            s += std::conj(a1[static_cast<std::size_t>(p)]) * gpq * a2[static_cast<std::size_t>(q)];
        }
    return s;
}

/// (1 / (K L^2)) sum_k sum_{l1,l2} |e|^2 by direct enumeration.
inline double batch_cost(const ArrayGeometry &g, const CombiningMatrix &phi, const std::vector<AngleBatch> &batches)
{
    double total = 0.0;
    for (const auto &b : batches)
    {
        double s = 0.0;
        for (const auto &d1 : b.dirs)
            for (const auto &d2 : b.dirs)
                s += std::norm(oracle::error_e(g, phi, d1, d2));
        const double l = static_cast<double>(b.dirs.size());
        total += s / (l * l);
    }
    return total / static_cast<double>(batches.size());
}

/// Central differences of `cost` over Re and Im of every entry, packed as
/// d/dRe + j d/dIm.
template <typename Cost>
cmat finite_difference_gradient(const CombiningMatrix &phi, Cost &&cost, double h = 1e-6)
{
    const cmat base = phi.entries();
    cmat out(base.rows(), base.cols());
    for (Eigen::Index r = 0; r < base.rows(); ++r)
        for (Eigen::Index c = 0; c < base.cols(); ++c)
        {
            double parts[2];
            for (int k = 0; k < 2; ++k)
            {
                const cplx step = k == 0 ? cplx(h, 0.0) : cplx(0.0, h);
                cmat plus = base, minus = base;
                plus(r, c) += step;
                minus(r, c) -= step;
                parts[k] = (cost(CombiningMatrix(plus)) - cost(CombiningMatrix(minus))) / (2.0 * h);
            }
            out(r, c) = {parts[0], parts[1]};
        }
    return out;
}

/// Deterministic single-snapshot CRB trace from a numerically differentiated
/// mean vector mu = Phi sum_s a(dir_s) x_s. Real parameters are all
/// azimuths, all elevations, Re x, Im x; the Fisher matrix is
/// (2 / sigma^2) Re(J^H J) and the bound is the trace of the angle block of
/// its inverse.
inline double numerical_fim_crb(const ArrayGeometry &g, const std::vector<Direction> &sources, const cvec &amplitudes,
                                const std::optional<CombiningMatrix> &phi, double sigma2, double h = 1e-6)
{
    const std::size_t s = sources.size();
    const std::size_t params = 4 * s;
    std::vector<double> theta(params);
    for (std::size_t k = 0; k < s; ++k)
    {
        theta[k] = sources[k].azimuth;
        theta[s + k] = sources[k].elevation;
        theta[2 * s + k] = amplitudes[static_cast<Eigen::Index>(k)].real();
        theta[3 * s + k] = amplitudes[static_cast<Eigen::Index>(k)].imag();
    }

    auto mean = [&](const std::vector<double> &t) {
        const std::size_t n = g.element_count();
        std::vector<cplx> y(n, 0.0);
        for (std::size_t k = 0; k < s; ++k)
        {
            const auto a = oracle::steering(g, {t[k], t[s + k]});
            const cplx x(t[2 * s + k], t[3 * s + k]);
            for (std::size_t e = 0; e < n; ++e)
                y[e] += a[e] * x;
        }
        if (!phi)
            return y;
        const cmat &f = phi->entries();
        std::vector<cplx> z(static_cast<std::size_t>(f.rows()), 0.0);
        for (Eigen::Index m = 0; m < f.rows(); ++m)
            for (Eigen::Index e = 0; e < f.cols(); ++e)
                z[static_cast<std::size_t>(m)] += f(m, e) * y[static_cast<std::size_t>(e)];
        return z;
    };

    std::vector<std::vector<cplx>> jac(params);
    for (std::size_t p = 0; p < params; ++p)
    {
        auto tp = theta, tm = theta;
        tp[p] += h;
        tm[p] -= h;
        const auto yp = mean(tp), ym = mean(tm);
        jac[p].resize(yp.size());
        for (std::size_t i = 0; i < yp.size(); ++i)
            jac[p][i] = (yp[i] - ym[i]) / (2.0 * h);
    }

    Eigen::MatrixXd fim(static_cast<Eigen::Index>(params), static_cast<Eigen::Index>(params));
    for (std::size_t p = 0; p < params; ++p)
        for (std::size_t q = 0; q < params; ++q)
        {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < jac[p].size(); ++i)
                acc += std::conj(jac[p][i]) * jac[q][i];
            fim(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = 2.0 / sigma2 * acc.real();
        }
    const Eigen::MatrixXd inv = fim.fullPivLu().inverse();
    double trace = 0.0;
    for (std::size_t p = 0; p < 2 * s; ++p)
        trace += inv(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    return trace;
}

/// Positions uniform in [-extent, extent]^3 wavelengths.
inline ArrayGeometry random_geometry(int n, std::mt19937_64 &rng, double extent = 1.0)
{
    std::uniform_real_distribution<double> u(-extent, extent);
    Eigen::Matrix3Xd pos(3, n);
    for (int k = 0; k < n; ++k)
        pos.col(k) << u(rng), u(rng), u(rng);
    return ArrayGeometry(pos);
}

inline cmat random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
    std::normal_distribution<double> nd;
    cmat m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = {nd(rng), nd(rng)};
    return m;
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
inline cmat random_unitary(Eigen::Index n, std::mt19937_64 &rng)
{
    Eigen::HouseholderQR<cmat> qr(random_complex(n, n, rng));
    return qr.householderQ() * cmat::Identity(n, n);
}

inline AngleBatch random_batch(int l, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> az(0.0, 2.0 * pi), el(0.1, pi - 0.1);
    AngleBatch b;
    for (int k = 0; k < l; ++k)
        b.dirs.push_back({az(rng), el(rng)});
    return b;
}

inline double max_abs(const cmat &m)
{
    return m.cwiseAbs().maxCoeff();
}

} // namespace oracle
