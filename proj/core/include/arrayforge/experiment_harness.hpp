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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arrayforge/crb_eval.hpp"
#include "arrayforge/serialization.hpp"
#include "arrayforge/sgd_designer.hpp"

namespace arrayforge
{

/// Library version string baked in at build time.
const char *version();

enum class DesignMethod
{
    gaussian,
    sgd,
    external,
};

const char *to_string(DesignMethod method);
DesignMethod design_method_from_string(const std::string &name);

/// M = round(rho * N); throws std::invalid_argument unless 1 <= M <= N.
int channels_for_rate(double rho, std::size_t element_count);

struct SweepSpec
{
    std::vector<double> compression_rates;
    int seeds_per_point = 5;
    /// Seeds used are base_seed, base_seed + 1, ...
    std::uint64_t base_seed = 0;
    std::vector<DesignMethod> methods{DesignMethod::gaussian, DesignMethod::sgd};
    ScfGrid grid;
    OptimizerConfig optimizer;
    /// Externally designed matrices keyed by channel count M.
    std::map<int, std::filesystem::path> external_phi_paths;

    void validate(std::size_t element_count) const;
};

struct SweepRow
{
    std::string method;
    double rho = 0.0;
    int channels = 0;
    std::uint64_t seed = 0;
    double scf_error = 0.0; ///< NaN when status != "ok"
    std::string status = "ok";
    /// The evaluated matrix; empty for failed rows.
    std::optional<CombiningMatrix> phi;
};

struct SummaryRow
{
    std::string method;
    double rho = 0.0;
    int channels = 0;
    std::size_t count = 0;
    double median = 0.0;
    double lower_quartile = 0.0;
    double upper_quartile = 0.0;
};

struct SweepReport
{
    std::vector<SweepRow> rows;       ///< sorted by (method, rho, seed)
    std::vector<SummaryRow> summary;  ///< sorted by (method, rho)
    json provenance;
};

/// Evaluates grid_scf_error for every (rate, seed, method) job. A missing or
/// malformed external matrix only fails its own row.
SweepReport run_scf_sweep(const ArrayGeometry &geometry, const SweepSpec &spec, int jobs = 1);

/// Linear-interpolation quantile (q in [0, 1]) of a non-empty sample.
double quantile(std::vector<double> values, double q);

struct MapSummary
{
    std::size_t valid_cells = 0;
    double median_log10 = 0.0;
    double variance_log10 = 0.0; ///< unbiased sample variance
};

MapSummary summarize_map(const CrbMap &map);

/// A combining matrix under test; an empty phi means the uncompressed array.
struct NamedPhi
{
    std::string name;
    std::optional<CombiningMatrix> phi;
    std::optional<std::uint64_t> seed;
};

struct CrbArtifact
{
    std::string method;
    double rho = 1.0;
    std::optional<std::uint64_t> seed;
    CrbMap map;
    MapSummary summary;
};

struct CrbReport
{
    std::vector<CrbArtifact> maps;
    json provenance;
};

/// Separation between the two sources of the pair scenarios: 2 pi / 10.
inline constexpr double default_pair_separation = 0.62831853071795864769;

/// Three maps (single, azimuth pair, elevation pair) per named matrix; the
/// uncompressed array is added as "uncompressed" when not supplied.
CrbReport run_crb_experiment(const ArrayGeometry &geometry, std::vector<NamedPhi> phis, const ScfGrid &grid,
                             double noise_variance = 1.0, double separation = default_pair_separation,
                             int jobs = 1,
                             std::vector<CrbMapKind> kinds = {CrbMapKind::single, CrbMapKind::azimuth_pair,
                                                              CrbMapKind::elevation_pair});

/// `<experiment>_<method>_<rho>_<seed>` without extension.
std::string artifact_stem(const std::string &experiment, const std::string &method, double rho,
                          const std::optional<std::uint64_t> &seed);

std::string sweep_rows_csv(const std::vector<SweepRow> &rows);
std::string summary_csv(const std::vector<SummaryRow> &rows);
std::string crb_map_csv(const CrbMap &map);

/// Writes per-job CSV + JSON sidecars and the aggregate tables. Returns the
/// written paths in write order.
std::vector<std::filesystem::path> write_sweep_artifacts(const SweepReport &report,
                                                         const std::filesystem::path &dir);
std::vector<std::filesystem::path> write_crb_artifacts(const CrbReport &report, const std::filesystem::path &dir);

} // namespace arrayforge
