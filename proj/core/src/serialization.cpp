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

#include "arrayforge/serialization.hpp"

#include <stdexcept>

#include "arrayforge/file_io.hpp"

namespace arrayforge
{

void to_json(json &j, const ArrayGeometry &geometry)
{
    json positions = json::array();
    const auto &pos = geometry.positions();
    for (Eigen::Index n = 0; n < pos.cols(); ++n)
        positions.push_back({pos(0, n), pos(1, n), pos(2, n)});
    j = json{{"positions", std::move(positions)}};
}

ArrayGeometry geometry_from_json(const json &j)
{
    const auto &positions = j.at("positions");
    if (!positions.is_array())
        throw std::invalid_argument("geometry: 'positions' must be an array of [x, y, z] triples");
    Eigen::Matrix3Xd pos(3, static_cast<Eigen::Index>(positions.size()));
    for (std::size_t n = 0; n < positions.size(); ++n)
    {
        const auto &p = positions[n];
        if (!p.is_array() || p.size() != 3)
            throw std::invalid_argument("geometry: position " + std::to_string(n) + " is not an [x, y, z] triple");
        for (int k = 0; k < 3; ++k)
            pos(k, static_cast<Eigen::Index>(n)) = p[static_cast<std::size_t>(k)].get<double>();
    }
    return ArrayGeometry(std::move(pos));
}

void to_json(json &j, const CombiningMatrix &phi)
{
    const cmat &e = phi.entries();
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < e.rows(); ++r)
    {
        json re_row = json::array(), im_row = json::array();
        for (Eigen::Index c = 0; c < e.cols(); ++c)
        {
            re_row.push_back(e(r, c).real());
            im_row.push_back(e(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    j = json{{"rows", e.rows()}, {"cols", e.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

void from_json(const json &j, CombiningMatrix &phi)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (rows < 1 || cols < 1 || re.size() != static_cast<std::size_t>(rows) ||
        im.size() != static_cast<std::size_t>(rows))
        throw std::invalid_argument("combining matrix: 're'/'im' row count does not match 'rows'");
    cmat e(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        const auto &re_row = re[static_cast<std::size_t>(r)];
        const auto &im_row = im[static_cast<std::size_t>(r)];
        if (re_row.size() != static_cast<std::size_t>(cols) || im_row.size() != static_cast<std::size_t>(cols))
            throw std::invalid_argument("combining matrix: row " + std::to_string(r) + " does not have 'cols' entries");
        for (Eigen::Index c = 0; c < cols; ++c)
            e(r, c) = {re_row[static_cast<std::size_t>(c)].get<double>(), im_row[static_cast<std::size_t>(c)].get<double>()};
    }
    phi = CombiningMatrix(std::move(e));
}

void to_json(json &j, const AngleRange &range)
{
    j = json::array({range.lo, range.hi});
}

void from_json(const json &j, AngleRange &range)
{
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("angle range must be a [lo, hi] pair");
    range.lo = j[0].get<double>();
    range.hi = j[1].get<double>();
}

void to_json(json &j, const ScfGrid &grid)
{
    j = json{{"azimuth_count", grid.azimuth_count},
             {"elevation_count", grid.elevation_count},
             {"azimuth_range", grid.azimuth},
             {"elevation_range", grid.elevation},
             {"elevation_convention", "polar angle from the stack axis"}};
}

void from_json(const json &j, ScfGrid &grid)
{
    grid.azimuth_count = j.value("azimuth_count", grid.azimuth_count);
    grid.elevation_count = j.value("elevation_count", grid.elevation_count);
    if (j.contains("azimuth_range"))
        grid.azimuth = j.at("azimuth_range").get<AngleRange>();
    if (j.contains("elevation_range"))
        grid.elevation = j.at("elevation_range").get<AngleRange>();
}

void to_json(json &j, const OptimizerConfig &config)
{
    j = json{{"iterations", config.iterations},
             {"batch_size", config.batch_size},
             {"step_size", config.step_size},
             {"drag", config.drag},
             {"azimuth_range", config.azimuth},
             {"elevation_range", config.elevation},
             {"seed", config.seed},
             {"renormalize_every", config.renormalize_every},
             {"record_every", config.record_every}};
}

void from_json(const json &j, OptimizerConfig &config)
{
    config.iterations = j.value("iterations", config.iterations);
    config.batch_size = j.value("batch_size", config.batch_size);
    config.step_size = j.value("step_size", config.step_size);
    config.drag = j.value("drag", config.drag);
    if (j.contains("azimuth_range"))
        config.azimuth = j.at("azimuth_range").get<AngleRange>();
    if (j.contains("elevation_range"))
        config.elevation = j.at("elevation_range").get<AngleRange>();
    config.seed = j.value("seed", config.seed);
    config.renormalize_every = j.value("renormalize_every", config.renormalize_every);
    config.record_every = j.value("record_every", config.record_every);
}

void to_json(json &j, const DesignTrace &trace)
{
    json costs = json::array();
    for (const auto &[iteration, cost] : trace.costs)
        costs.push_back({iteration, cost});
    j = json{{"schema", "arrayforge.design_trace/1"},
             {"method", "sgd"},
             {"channels", trace.channels},
             {"config", trace.config},
             {"costs", std::move(costs)},
             {"phi", trace.phi}};
}

void from_json(const json &j, DesignTrace &trace)
{
    trace.channels = j.at("channels").get<int>();
    trace.config = j.at("config").get<OptimizerConfig>();
    trace.costs.clear();
    for (const auto &c : j.at("costs"))
        trace.costs.emplace_back(c.at(0).get<int>(), c.at(1).get<double>());
    trace.phi = j.at("phi").get<CombiningMatrix>();
}

CombiningMatrix load_combining_matrix(const std::filesystem::path &path)
{
    const json j = json::parse(read_text_file(path));
    if (j.contains("phi"))
        return j.at("phi").get<CombiningMatrix>();
    return j.get<CombiningMatrix>();
}

ArrayGeometry load_geometry(const std::filesystem::path &path)
{
    return geometry_from_json(json::parse(read_text_file(path)));
}

std::string dump_json(const json &j)
{
    return j.dump(2) + "\n";
}

} // namespace arrayforge
