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

#include "arrayforge/experiment_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "arrayforge/file_io.hpp"
#include "arrayforge/parallel.hpp"

#ifndef ARRAYFORGE_VERSION
#define ARRAYFORGE_VERSION "unknown"
#endif

namespace arrayforge
{

namespace
{
constexpr const char *rate_convention = "rho = M / N with M = round(rho * N)";

struct SweepJob
{
    double rho;
    int channels;
    std::uint64_t seed;
    DesignMethod method;
};

json sweep_spec_json(const SweepSpec &spec)
{
    json methods = json::array();
    for (auto m : spec.methods)
        methods.push_back(to_string(m));
    json external = json::object();
    for (const auto &[m, path] : spec.external_phi_paths)
        external[std::to_string(m)] = path.string();
    return json{{"compression_rates", spec.compression_rates},
                {"seeds_per_point", spec.seeds_per_point},
                {"base_seed", spec.base_seed},
                {"methods", std::move(methods)},
                {"grid", spec.grid},
                {"optimizer", spec.optimizer},
                {"external_phi_paths", std::move(external)}};
}

std::string seed_label(const std::optional<std::uint64_t> &seed)
{
    return seed ? std::to_string(*seed) : std::string("na");
}
} // namespace

const char *version()
{
    return ARRAYFORGE_VERSION;
}

const char *to_string(DesignMethod method)
{
    switch (method)
    {
    case DesignMethod::gaussian:
        return "gaussian";
    case DesignMethod::sgd:
        return "sgd";
    case DesignMethod::external:
        return "external";
    }
    return "unknown";
}

DesignMethod design_method_from_string(const std::string &name)
{
    for (auto m : {DesignMethod::gaussian, DesignMethod::sgd, DesignMethod::external})
        if (name == to_string(m))
            return m;
    throw std::invalid_argument("unknown design method '" + name + "' (expected gaussian, sgd or external)");
}

int channels_for_rate(double rho, std::size_t element_count)
{
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("compression rate must lie in (0, 1]");
    const auto m = static_cast<int>(std::lround(rho * static_cast<double>(element_count)));
    if (m < 1 || m > static_cast<int>(element_count))
        throw std::invalid_argument("compression rate " + format_double(rho) + " gives M = " + std::to_string(m) +
                                    " outside [1, " + std::to_string(element_count) + "]");
    return m;
}

void SweepSpec::validate(std::size_t element_count) const
{
    if (compression_rates.empty())
        throw std::invalid_argument("sweep: at least one compression rate is required");
    for (double rho : compression_rates)
        channels_for_rate(rho, element_count);
    if (seeds_per_point < 1)
        throw std::invalid_argument("sweep: seeds_per_point must be positive");
    if (methods.empty())
        throw std::invalid_argument("sweep: at least one method is required");
    grid.validate();
    optimizer.validate();
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SweepReport run_scf_sweep(const ArrayGeometry &geometry, const SweepSpec &spec, int jobs)
{
    const std::size_t n = geometry.element_count();
    spec.validate(n);

    std::vector<SweepJob> work;
    for (double rho : spec.compression_rates)
        for (int s = 0; s < spec.seeds_per_point; ++s)
            for (auto method : spec.methods)
                work.push_back({rho, channels_for_rate(rho, n), spec.base_seed + static_cast<std::uint64_t>(s), method});

    std::vector<SweepRow> rows(work.size());
    parallel_for(work.size(), jobs, [&](std::size_t i) {
        const SweepJob &job = work[i];
        SweepRow &row = rows[i];
        row.method = to_string(job.method);
        row.rho = job.rho;
        row.channels = job.channels;
        row.seed = job.seed;
        row.scf_error = std::numeric_limits<double>::quiet_NaN();
        try
        {
            CombiningMatrix phi;
            switch (job.method)
            {
            case DesignMethod::gaussian:
                phi = random_gaussian_phi(job.channels, static_cast<int>(n), job.seed);
                break;
            case DesignMethod::sgd:
            {
                OptimizerConfig config = spec.optimizer;
                config.seed = job.seed;
                phi = design(geometry, job.channels, config).phi;
                break;
            }
            case DesignMethod::external:
            {
                const auto it = spec.external_phi_paths.find(job.channels);
                if (it == spec.external_phi_paths.end())
                    throw std::runtime_error("no external matrix configured for M = " + std::to_string(job.channels));
                phi = load_combining_matrix(it->second);
                if (phi.rows() != job.channels)
                    throw std::runtime_error("external matrix has " + std::to_string(phi.rows()) +
                                             " rows, expected " + std::to_string(job.channels));
                break;
            }
            }
            row.scf_error = grid_scf_error(geometry, phi, spec.grid);
            row.phi = std::move(phi);
        }
        catch (const std::exception &e)
        {
            row.status = std::string("error: ") + e.what();
        }
    });

    std::sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.method, a.rho, a.seed) < std::tie(b.method, b.rho, b.seed);
    });

    SweepReport report;
    for (std::size_t i = 0; i < rows.size();)
    {
        std::size_t j = i;
        std::vector<double> values;
        while (j < rows.size() && rows[j].method == rows[i].method && rows[j].rho == rows[i].rho)
        {
            if (rows[j].status == "ok")
                values.push_back(rows[j].scf_error);
            ++j;
        }
        SummaryRow s;
        s.method = rows[i].method;
        s.rho = rows[i].rho;
        s.channels = rows[i].channels;
        s.count = values.size();
        if (values.empty())
            s.median = s.lower_quartile = s.upper_quartile = std::numeric_limits<double>::quiet_NaN();
        else
        {
            s.median = quantile(values, 0.5);
            s.lower_quartile = quantile(values, 0.25);
            s.upper_quartile = quantile(values, 0.75);
        }
        report.summary.push_back(std::move(s));
        i = j;
    }
    report.rows = std::move(rows);
    report.provenance = json{{"schema", "arrayforge.provenance/1"},
                             {"experiment", "scf"},
                             {"code_version", version()},
                             {"compression_rate_convention", rate_convention},
                             {"geometry", geometry},
                             {"spec", sweep_spec_json(spec)}};
    return report;
}

MapSummary summarize_map(const CrbMap &map)
{
    std::vector<double> logs;
    for (const auto &cell : map.cells)
        if (cell.status == CellStatus::ok && cell.value > 0.0 && std::isfinite(cell.value))
            logs.push_back(std::log10(cell.value));

    MapSummary s;
    s.valid_cells = logs.size();
    if (logs.empty())
    {
        s.median_log10 = s.variance_log10 = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.median_log10 = quantile(logs, 0.5);
    if (logs.size() < 2)
        return s;
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    double ss = 0.0;
    for (double v : logs)
        ss += (v - mean) * (v - mean);
    s.variance_log10 = ss / static_cast<double>(logs.size() - 1);
    return s;
}

CrbReport run_crb_experiment(const ArrayGeometry &geometry, std::vector<NamedPhi> phis, const ScfGrid &grid,
                             double noise_variance, double separation, int jobs, std::vector<CrbMapKind> kinds)
{
    grid.validate();
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("crb experiment: noise variance must be positive");
    const std::size_t n = geometry.element_count();
    for (const auto &p : phis)
        if (p.phi && static_cast<std::size_t>(p.phi->cols()) != n)
            throw std::invalid_argument("crb experiment: matrix '" + p.name + "' does not match the array size");

    if (std::none_of(phis.begin(), phis.end(), [](const NamedPhi &p) { return !p.phi; }))
        phis.push_back({"uncompressed", std::nullopt, std::nullopt});
    std::sort(phis.begin(), phis.end(), [](const NamedPhi &a, const NamedPhi &b) {
        return std::tie(a.name, a.seed) < std::tie(b.name, b.seed);
    });

    CrbReport report;
    json entries = json::array();
    for (const auto &p : phis)
    {
        const double rho = p.phi ? static_cast<double>(p.phi->rows()) / static_cast<double>(n) : 1.0;
        for (auto kind : kinds)
        {
            CrbArtifact art;
            art.method = p.name;
            art.rho = rho;
            art.seed = p.seed;
            art.map = crb_map(geometry, p.phi, grid, kind, separation, noise_variance, jobs);
            art.summary = summarize_map(art.map);
            report.maps.push_back(std::move(art));
        }
        entries.push_back(json{{"method", p.name},
                               {"rho", rho},
                               {"seed", p.seed ? json(*p.seed) : json(nullptr)},
                               {"phi", p.phi ? json(*p.phi) : json("identity")}});
    }

    json kind_names = json::array();
    for (auto kind : kinds)
        kind_names.push_back(to_string(kind));
    report.provenance = json{{"schema", "arrayforge.provenance/1"},
                             {"experiment", "crb"},
                             {"code_version", version()},
                             {"compression_rate_convention", rate_convention},
                             {"geometry", geometry},
                             {"grid", grid},
                             {"noise_variance", noise_variance},
                             {"separation", separation},
                             {"amplitudes", "all ones"},
                             {"kinds", std::move(kind_names)},
                             {"matrices", std::move(entries)}};
    return report;
}

std::string artifact_stem(const std::string &experiment, const std::string &method, double rho,
                          const std::optional<std::uint64_t> &seed)
{
    return experiment + "_" + method + "_" + format_double(rho) + "_" + seed_label(seed);
}

std::string sweep_rows_csv(const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "rho,method,M,seed,scf_error,status\n";
    for (const auto &r : rows)
        out << format_double(r.rho) << ',' << r.method << ',' << r.channels << ',' << r.seed << ','
            << format_double(r.scf_error) << ",\"" << r.status << "\"\n";
    return out.str();
}

std::string summary_csv(const std::vector<SummaryRow> &rows)
{
    std::ostringstream out;
    out << "rho,method,M,count,median,q1,q3\n";
    for (const auto &r : rows)
        out << format_double(r.rho) << ',' << r.method << ',' << r.channels << ',' << r.count << ','
            << format_double(r.median) << ',' << format_double(r.lower_quartile) << ','
            << format_double(r.upper_quartile) << '\n';
    return out.str();
}

std::string crb_map_csv(const CrbMap &map)
{
    std::ostringstream out;
    out << "azimuth,elevation,crb_value,status\n";
    for (const auto &c : map.cells)
        out << format_double(c.source.azimuth) << ',' << format_double(c.source.elevation) << ','
            << format_double(c.value) << ',' << to_string(c.status) << '\n';
    return out.str();
}

std::vector<std::filesystem::path> write_sweep_artifacts(const SweepReport &report, const std::filesystem::path &dir)
{
    std::vector<std::filesystem::path> written;
    for (const auto &row : report.rows)
    {
        const std::string stem = artifact_stem("scf", row.method, row.rho, row.seed);
        const auto csv_path = dir / (stem + ".csv");
        write_file_atomic(csv_path, sweep_rows_csv({row}));
        written.push_back(csv_path);

        json sidecar = report.provenance;
        sidecar["job"] = json{{"method", row.method},
                              {"rho", row.rho},
                              {"M", row.channels},
                              {"seed", row.seed},
                              {"scf_error", row.status == "ok" ? json(row.scf_error) : json(nullptr)},
                              {"status", row.status},
                              {"phi", row.phi ? json(*row.phi) : json(nullptr)}};
        const auto json_path = dir / (stem + ".json");
        write_file_atomic(json_path, dump_json(sidecar));
        written.push_back(json_path);
    }

    const auto rows_path = dir / "scf_sweep.csv";
    write_file_atomic(rows_path, sweep_rows_csv(report.rows));
    written.push_back(rows_path);
    const auto summary_path = dir / "scf_summary.csv";
    write_file_atomic(summary_path, summary_csv(report.summary));
    written.push_back(summary_path);
    const auto prov_path = dir / "scf_sweep.json";
    write_file_atomic(prov_path, dump_json(report.provenance));
    written.push_back(prov_path);
    return written;
}

std::vector<std::filesystem::path> write_crb_artifacts(const CrbReport &report, const std::filesystem::path &dir)
{
    std::vector<std::filesystem::path> written;
    std::ostringstream summary;
    summary << "method,rho,seed,kind,valid_cells,median_log10_crb,variance_log10_crb\n";
    for (const auto &art : report.maps)
    {
        const std::string stem =
            artifact_stem(std::string("crb-") + to_string(art.map.kind), art.method, art.rho, art.seed);
        const auto csv_path = dir / (stem + ".csv");
        write_file_atomic(csv_path, crb_map_csv(art.map));
        written.push_back(csv_path);

        json sidecar = report.provenance;
        sidecar["map"] = json{{"method", art.method},
                              {"rho", art.rho},
                              {"seed", art.seed ? json(*art.seed) : json(nullptr)},
                              {"kind", to_string(art.map.kind)},
                              {"separation", art.map.separation},
                              {"valid_cells", art.summary.valid_cells},
                              {"median_log10_crb", art.summary.median_log10},
                              {"variance_log10_crb", art.summary.variance_log10}};
        const auto json_path = dir / (stem + ".json");
        write_file_atomic(json_path, dump_json(sidecar));
        written.push_back(json_path);

        summary << art.method << ',' << format_double(art.rho) << ',' << seed_label(art.seed) << ','
                << to_string(art.map.kind) << ',' << art.summary.valid_cells << ','
                << format_double(art.summary.median_log10) << ',' << format_double(art.summary.variance_log10)
                << '\n';
    }
    const auto summary_path = dir / "crb_summary.csv";
    write_file_atomic(summary_path, summary.str());
    written.push_back(summary_path);
    const auto prov_path = dir / "crb_experiment.json";
    write_file_atomic(prov_path, dump_json(report.provenance));
    written.push_back(prov_path);
    return written;
}

} // namespace arrayforge
