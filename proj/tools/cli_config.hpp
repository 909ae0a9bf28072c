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
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arrayforge/experiment_harness.hpp"

namespace arrayforge::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 2,         ///< unknown flag, malformed command line
    exit_invalid_value = 3, ///< out-of-range or inconsistent value
    exit_missing_file = 4,  ///< referenced input file does not exist
    exit_runtime = 5,       ///< failure while running a validated config
};

class CliError : public std::runtime_error
{
public:
    CliError(const std::string &what, int code) : std::runtime_error(what), code_(code) {}
    int exit_code() const { return code_; }

private:
    int code_;
};

class UsageError : public CliError
{
public:
    explicit UsageError(const std::string &what) : CliError(what, exit_usage) {}
};

class InvalidValueError : public CliError
{
public:
    explicit InvalidValueError(const std::string &what) : CliError(what, exit_invalid_value) {}
};

class MissingFileError : public CliError
{
public:
    explicit MissingFileError(const std::string &what) : CliError(what, exit_missing_file) {}
};

enum class Subcommand
{
    design,
    evaluate_scf,
    evaluate_crb,
    sweep,
};

const char *to_string(Subcommand cmd);

/// Either a geometry JSON file or stacked-circular-array parameters.
struct GeometrySpec
{
    std::optional<std::filesystem::path> file;
    int stacks = 3;
    int per_stack = 11;
    double spacing_wl = 0.5;
    double radius_wl = 0.68;

    ArrayGeometry build() const;
};

/// A combining matrix input for evaluate-crb, given as name=path.
struct NamedPath
{
    std::string name;
    std::filesystem::path path;
};

inline constexpr const char *config_schema = "arrayforge.config/1";

struct CliConfig
{
    Subcommand subcommand = Subcommand::design;
    GeometrySpec geometry;
    OptimizerConfig optimizer;
    ScfGrid grid;
    std::uint64_t seed = 0;
    std::string seed_source = "default";
    std::filesystem::path out = ".";
    int jobs = 0;

    // design
    int channels = 13;

    // evaluate-scf
    std::optional<std::filesystem::path> phi_path;
    std::string method_label;

    // evaluate-crb
    std::vector<NamedPath> crb_inputs;
    double noise_variance = 1.0;
    double separation = default_pair_separation;
    std::vector<CrbMapKind> kinds{CrbMapKind::single, CrbMapKind::azimuth_pair, CrbMapKind::elevation_pair};

    // sweep
    std::vector<double> rates{0.2, 0.4, 0.6};
    int seeds_per_point = 5;
    std::vector<DesignMethod> methods{DesignMethod::gaussian, DesignMethod::sgd};
    std::map<int, std::filesystem::path> external;

    /// Every resolved setting except `out` and `jobs`, which do not affect
    /// results.
    json provenance() const;
};

using Environment = std::map<std::string, std::string>;

/// Reads ARRAYFORGE_SEED from the process environment.
Environment process_environment();

/// Resolves documented defaults < config file (--config) < flags, with
/// ARRAYFORGE_SEED as a seed fallback below the config file. Throws
/// UsageError, InvalidValueError or MissingFileError. `--help` throws a
/// CliError with exit code 0 carrying the help text.
CliConfig parse_and_validate(const std::vector<std::string> &args, const Environment &env = {});

/// Executes a validated config; prints one summary line per artifact to
/// `out`. Returns an ExitCode.
int run(const CliConfig &config, std::ostream &out, std::ostream &err);

/// parse_and_validate + run with error-to-exit-code mapping.
int main_entry(const std::vector<std::string> &args, const Environment &env, std::ostream &out, std::ostream &err);

} // namespace arrayforge::cli
