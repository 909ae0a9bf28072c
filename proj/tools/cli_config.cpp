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

#include "cli_config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "CLI11.hpp"

#include "arrayforge/file_io.hpp"

namespace arrayforge::cli
{

namespace fs = std::filesystem;

namespace
{

// Raw command-line values; std::nullopt / empty means "not given".
struct Flags
{
    std::optional<std::string> config_file;
    std::optional<std::string> geometry;
    std::optional<int> stacks, per_stack;
    std::optional<double> spacing, radius;

    std::optional<int> iters, batch, renormalize_every, record_every;
    std::optional<double> alpha, eta;
    std::vector<double> sample_azimuth, sample_elevation;

    std::optional<int> grid_azimuth, grid_elevation;
    std::vector<double> grid_azimuth_range, grid_elevation_range;

    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;

    std::optional<int> channels;
    std::optional<std::string> phi;
    std::optional<std::string> method;

    std::vector<std::string> crb_phis;
    std::optional<double> sigma2, separation;
    std::vector<std::string> kinds;

    std::vector<double> rates;
    std::optional<int> seeds;
    std::vector<std::string> methods;
    std::vector<std::string> external;
};

void add_common(CLI::App &sub, Flags &f)
{
    sub.add_option("--config", f.config_file, "JSON config file (schema arrayforge.config/1)");
    sub.add_option("--geometry", f.geometry, "Geometry JSON file or suca:STACKS,PER_STACK,SPACING,RADIUS");
    sub.add_option("--stacks", f.stacks, "Number of stacked rings");
    sub.add_option("--per-stack", f.per_stack, "Elements per ring");
    sub.add_option("--spacing", f.spacing, "Ring spacing in wavelengths");
    sub.add_option("--radius", f.radius, "Ring radius in wavelengths");
    sub.add_option("--seed", f.seed, "Random seed (fallback: ARRAYFORGE_SEED)");
    sub.add_option("--out", f.out, "Output file or directory");
    sub.add_option("--jobs", f.jobs, "Worker threads (0 = all cores)");
}

void add_optimizer(CLI::App &sub, Flags &f)
{
    sub.add_option("--iters", f.iters, "SGD iterations K");
    sub.add_option("--batch", f.batch, "Directions per iteration L");
    sub.add_option("--alpha", f.alpha, "Step size");
    sub.add_option("--eta", f.eta, "Momentum drag in [0, 1)");
    sub.add_option("--renormalize-every", f.renormalize_every, "Column renormalization period");
    sub.add_option("--record-every", f.record_every, "Cost recording period");
    sub.add_option("--sample-azimuth", f.sample_azimuth, "Sampling azimuth range lo,hi (rad)")
        ->delimiter(',')
        ->expected(2);
    sub.add_option("--sample-elevation", f.sample_elevation, "Sampling polar elevation range lo,hi (rad)")
        ->delimiter(',')
        ->expected(2);
}

void add_grid(CLI::App &sub, Flags &f)
{
    sub.add_option("--grid-azimuth", f.grid_azimuth, "Grid points in azimuth");
    sub.add_option("--grid-elevation", f.grid_elevation, "Grid points in elevation");
    sub.add_option("--grid-azimuth-range", f.grid_azimuth_range, "Grid azimuth range lo,hi (rad)")
        ->delimiter(',')
        ->expected(2);
    sub.add_option("--grid-elevation-range", f.grid_elevation_range, "Grid polar elevation range lo,hi (rad)")
        ->delimiter(',')
        ->expected(2);
}

void require_file(const fs::path &path, const std::string &what)
{
    if (!fs::is_regular_file(path))
        throw MissingFileError(what + " '" + path.string() + "' does not exist");
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        parts.push_back(item);
    return parts;
}

double parse_double(const std::string &s, const std::string &what)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception &)
    {
        throw InvalidValueError(what + ": '" + s + "' is not a number");
    }
}

int parse_int(const std::string &s, const std::string &what)
{
    try
    {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception &)
    {
        throw InvalidValueError(what + ": '" + s + "' is not an integer");
    }
}

AngleRange range_from(const std::vector<double> &v)
{
    return {v.at(0), v.at(1)};
}

// Config-file layer. Unknown keys are rejected so typos do not silently
// fall back to defaults.
void apply_config_file(CliConfig &cfg, const fs::path &path)
{
    require_file(path, "config file");
    json j;
    try
    {
        j = json::parse(read_text_file(path));
    }
    catch (const json::exception &e)
    {
        throw InvalidValueError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw InvalidValueError("config file must contain a JSON object");
    if (j.value("schema", std::string()) != config_schema)
        throw InvalidValueError(std::string("config file must declare \"schema\": \"") + config_schema + "\"");

    static const std::vector<std::string> known{"schema", "geometry", "optimizer", "grid", "design", "evaluate",
                                                "crb",    "sweep",    "seed",      "out"};
    for (const auto &item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw InvalidValueError("config file: unknown key '" + item.key() + "'");

    try
    {
        if (j.contains("geometry"))
        {
            const auto &g = j.at("geometry");
            const bool has_suca = g.contains("stacks") || g.contains("per_stack") || g.contains("spacing_wl") ||
                                  g.contains("radius_wl");
            if (g.contains("file") && has_suca)
                throw InvalidValueError("config file: geometry must give either 'file' or SUCA parameters, not both");
            if (g.contains("file"))
                cfg.geometry.file = fs::path(g.at("file").get<std::string>());
            cfg.geometry.stacks = g.value("stacks", cfg.geometry.stacks);
            cfg.geometry.per_stack = g.value("per_stack", cfg.geometry.per_stack);
            cfg.geometry.spacing_wl = g.value("spacing_wl", cfg.geometry.spacing_wl);
            cfg.geometry.radius_wl = g.value("radius_wl", cfg.geometry.radius_wl);
        }
        if (j.contains("optimizer"))
            from_json(j.at("optimizer"), cfg.optimizer);
        if (j.contains("grid"))
            from_json(j.at("grid"), cfg.grid);
        if (j.contains("seed"))
        {
            cfg.seed = j.at("seed").get<std::uint64_t>();
            cfg.seed_source = "config";
        }
        if (j.contains("out"))
            cfg.out = j.at("out").get<std::string>();
        if (j.contains("design"))
            cfg.channels = j.at("design").value("channels", cfg.channels);
        if (j.contains("evaluate"))
        {
            const auto &e = j.at("evaluate");
            if (e.contains("phi"))
                cfg.phi_path = fs::path(e.at("phi").get<std::string>());
            cfg.method_label = e.value("method", cfg.method_label);
        }
        if (j.contains("crb"))
        {
            const auto &c = j.at("crb");
            cfg.noise_variance = c.value("noise_variance", cfg.noise_variance);
            cfg.separation = c.value("separation", cfg.separation);
            if (c.contains("kinds"))
            {
                cfg.kinds.clear();
                for (const auto &k : c.at("kinds"))
                    cfg.kinds.push_back(crb_map_kind_from_string(k.get<std::string>()));
            }
            if (c.contains("phi"))
            {
                cfg.crb_inputs.clear();
                for (const auto &item : c.at("phi").items())
                    cfg.crb_inputs.push_back({item.key(), fs::path(item.value().get<std::string>())});
            }
        }
        if (j.contains("sweep"))
        {
            const auto &s = j.at("sweep");
            if (s.contains("compression_rates"))
                cfg.rates = s.at("compression_rates").get<std::vector<double>>();
            cfg.seeds_per_point = s.value("seeds_per_point", cfg.seeds_per_point);
            if (s.contains("methods"))
            {
                cfg.methods.clear();
                for (const auto &m : s.at("methods"))
                    cfg.methods.push_back(design_method_from_string(m.get<std::string>()));
            }
            if (s.contains("external_phi_paths"))
            {
                cfg.external.clear();
                for (const auto &item : s.at("external_phi_paths").items())
                    cfg.external[parse_int(item.key(), "external_phi_paths key")] =
                        fs::path(item.value().get<std::string>());
            }
        }
    }
    catch (const json::exception &e)
    {
        throw InvalidValueError("config file '" + path.string() + "': " + e.what());
    }
    catch (const std::invalid_argument &e)
    {
        throw InvalidValueError(std::string("config file: ") + e.what());
    }
}

void apply_geometry_flags(CliConfig &cfg, const Flags &f)
{
    const bool suca_flags = f.stacks || f.per_stack || f.spacing || f.radius;
    if (f.geometry && suca_flags)
        throw InvalidValueError("give the geometry either with --geometry or with --stacks/--per-stack/--spacing/"
                                "--radius, not both");
    if (f.geometry)
    {
        const std::string &g = *f.geometry;
        if (g.rfind("suca:", 0) == 0)
        {
            const auto parts = split(g.substr(5), ',');
            if (parts.size() != 4)
                throw InvalidValueError("--geometry suca: expects STACKS,PER_STACK,SPACING,RADIUS");
            cfg.geometry.file.reset();
            cfg.geometry.stacks = parse_int(parts[0], "--geometry stacks");
            cfg.geometry.per_stack = parse_int(parts[1], "--geometry per_stack");
            cfg.geometry.spacing_wl = parse_double(parts[2], "--geometry spacing");
            cfg.geometry.radius_wl = parse_double(parts[3], "--geometry radius");
        }
        else
            cfg.geometry.file = fs::path(g);
    }
    if (suca_flags)
    {
        cfg.geometry.file.reset();
        if (f.stacks)
            cfg.geometry.stacks = *f.stacks;
        if (f.per_stack)
            cfg.geometry.per_stack = *f.per_stack;
        if (f.spacing)
            cfg.geometry.spacing_wl = *f.spacing;
        if (f.radius)
            cfg.geometry.radius_wl = *f.radius;
    }
}

void apply_flags(CliConfig &cfg, const Flags &f)
{
    apply_geometry_flags(cfg, f);

    if (f.iters)
        cfg.optimizer.iterations = *f.iters;
    if (f.batch)
        cfg.optimizer.batch_size = *f.batch;
    if (f.alpha)
        cfg.optimizer.step_size = *f.alpha;
    if (f.eta)
        cfg.optimizer.drag = *f.eta;
    if (f.renormalize_every)
        cfg.optimizer.renormalize_every = *f.renormalize_every;
    if (f.record_every)
        cfg.optimizer.record_every = *f.record_every;
    if (!f.sample_azimuth.empty())
        cfg.optimizer.azimuth = range_from(f.sample_azimuth);
    if (!f.sample_elevation.empty())
        cfg.optimizer.elevation = range_from(f.sample_elevation);

    if (f.grid_azimuth)
        cfg.grid.azimuth_count = *f.grid_azimuth;
    if (f.grid_elevation)
        cfg.grid.elevation_count = *f.grid_elevation;
    if (!f.grid_azimuth_range.empty())
        cfg.grid.azimuth = range_from(f.grid_azimuth_range);
    if (!f.grid_elevation_range.empty())
        cfg.grid.elevation = range_from(f.grid_elevation_range);

    if (f.seed)
    {
        cfg.seed = *f.seed;
        cfg.seed_source = "flag";
    }
    if (f.out)
        cfg.out = *f.out;
    if (f.jobs)
        cfg.jobs = *f.jobs;
    if (f.channels)
        cfg.channels = *f.channels;
    if (f.phi)
        cfg.phi_path = fs::path(*f.phi);
    if (f.method)
        cfg.method_label = *f.method;

    if (!f.crb_phis.empty())
    {
        cfg.crb_inputs.clear();
        for (const auto &spec : f.crb_phis)
        {
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
                throw InvalidValueError("--phi for evaluate-crb expects NAME=PATH, got '" + spec + "'");
            cfg.crb_inputs.push_back({spec.substr(0, eq), fs::path(spec.substr(eq + 1))});
        }
    }
    if (f.sigma2)
        cfg.noise_variance = *f.sigma2;
    if (f.separation)
        cfg.separation = *f.separation;
    if (!f.kinds.empty())
    {
        cfg.kinds.clear();
        try
        {
            for (const auto &k : f.kinds)
                cfg.kinds.push_back(crb_map_kind_from_string(k));
        }
        catch (const std::invalid_argument &e)
        {
            throw InvalidValueError(e.what());
        }
    }

    if (!f.rates.empty())
        cfg.rates = f.rates;
    if (f.seeds)
        cfg.seeds_per_point = *f.seeds;
    if (!f.methods.empty())
    {
        cfg.methods.clear();
        try
        {
            for (const auto &m : f.methods)
                cfg.methods.push_back(design_method_from_string(m));
        }
        catch (const std::invalid_argument &e)
        {
            throw InvalidValueError(e.what());
        }
    }
    if (!f.external.empty())
    {
        cfg.external.clear();
        for (const auto &spec : f.external)
        {
            const auto eq = spec.find('=');
            if (eq == std::string::npos)
                throw InvalidValueError("--external expects M=PATH, got '" + spec + "'");
            cfg.external[parse_int(spec.substr(0, eq), "--external channel count")] = fs::path(spec.substr(eq + 1));
        }
    }
}

void validate(const CliConfig &cfg)
{
    if (cfg.geometry.file)
        require_file(*cfg.geometry.file, "geometry file");

    ArrayGeometry geometry = [&] {
        try
        {
            return cfg.geometry.build();
        }
        catch (const std::invalid_argument &e)
        {
            throw InvalidValueError(e.what());
        }
        catch (const json::exception &e)
        {
            throw InvalidValueError("geometry file: " + std::string(e.what()));
        }
    }();
    const auto n = static_cast<int>(geometry.element_count());

    try
    {
        cfg.optimizer.validate();
        cfg.grid.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw InvalidValueError(e.what());
    }
    if (cfg.jobs < 0)
        throw InvalidValueError("--jobs must be non-negative");

    switch (cfg.subcommand)
    {
    case Subcommand::design:
        if (cfg.channels < 1 || cfg.channels > n)
            throw InvalidValueError("--channels must lie in [1, " + std::to_string(n) + "], got " +
                                    std::to_string(cfg.channels));
        break;
    case Subcommand::evaluate_scf:
        if (!cfg.phi_path)
            throw InvalidValueError("evaluate-scf needs --phi PATH (a combining matrix or design trace)");
        require_file(*cfg.phi_path, "combining matrix file");
        break;
    case Subcommand::evaluate_crb:
        if (!(cfg.noise_variance > 0.0) || !std::isfinite(cfg.noise_variance))
            throw InvalidValueError("--sigma2 must be positive");
        if (!(cfg.separation > 0.0) || !std::isfinite(cfg.separation))
            throw InvalidValueError("--separation must be positive");
        if (cfg.kinds.empty())
            throw InvalidValueError("at least one CRB map kind is required");
        for (const auto &input : cfg.crb_inputs)
            require_file(input.path, "combining matrix file for '" + input.name + "'");
        break;
    case Subcommand::sweep:
    {
        SweepSpec spec;
        spec.compression_rates = cfg.rates;
        spec.seeds_per_point = cfg.seeds_per_point;
        spec.methods = cfg.methods;
        spec.grid = cfg.grid;
        spec.optimizer = cfg.optimizer;
        try
        {
            spec.validate(geometry.element_count());
        }
        catch (const std::invalid_argument &e)
        {
            throw InvalidValueError(e.what());
        }
        if (std::find(cfg.methods.begin(), cfg.methods.end(), DesignMethod::external) != cfg.methods.end())
            for (double rho : cfg.rates)
            {
                const int m = channels_for_rate(rho, geometry.element_count());
                if (!cfg.external.contains(m))
                    throw InvalidValueError("method 'external' needs --external " + std::to_string(m) + "=PATH");
            }
        for (const auto &[m, path] : cfg.external)
            require_file(path, "external combining matrix for M = " + std::to_string(m));
        break;
    }
    }
}

bool has_extension(const fs::path &p, const char *ext)
{
    return p.extension() == ext;
}

json design_provenance(const CliConfig &cfg, const ArrayGeometry &geometry)
{
    return json{{"schema", "arrayforge.provenance/1"},
                {"code_version", version()},
                {"compression_rate_convention", "rho = M / N"},
                {"geometry", geometry},
                {"cli", cfg.provenance()}};
}

int run_design(const CliConfig &cfg, const ArrayGeometry &geometry, std::ostream &out)
{
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = cfg.seed;
    const DesignTrace trace = design(geometry, cfg.channels, opt);
    const double rho = static_cast<double>(cfg.channels) / static_cast<double>(geometry.element_count());

    const fs::path path =
        has_extension(cfg.out, ".json") ? cfg.out : cfg.out / (artifact_stem("design", "sgd", rho, opt.seed) + ".json");
    json doc = trace;
    doc["provenance"] = design_provenance(cfg, geometry);
    write_file_atomic(path, dump_json(doc));

    const double last = trace.costs.empty() ? std::nan("") : trace.costs.back().second;
    out << "design: M=" << cfg.channels << " N=" << geometry.element_count() << " K=" << opt.iterations
        << " seed=" << opt.seed << " last_batch_cost=" << format_double(last) << " -> " << path.string() << '\n';
    return exit_ok;
}

int run_evaluate_scf(const CliConfig &cfg, const ArrayGeometry &geometry, std::ostream &out)
{
    const json doc = json::parse(read_text_file(*cfg.phi_path));
    CombiningMatrix phi;
    std::string method = "external";
    std::optional<std::uint64_t> seed;
    if (doc.contains("phi"))
    {
        phi = doc.at("phi").get<CombiningMatrix>();
        method = doc.value("method", method);
        if (doc.contains("config"))
            seed = doc.at("config").value("seed", std::uint64_t{0});
    }
    else
        phi = doc.get<CombiningMatrix>();
    if (!cfg.method_label.empty())
        method = cfg.method_label;

    const double err = grid_scf_error(geometry, phi, cfg.grid, cfg.jobs);
    const double rho = static_cast<double>(phi.rows()) / static_cast<double>(geometry.element_count());

    std::ostringstream csv;
    csv << "rho,method,seed,scf_error\n"
        << format_double(rho) << ',' << method << ',' << (seed ? std::to_string(*seed) : "na") << ','
        << format_double(err) << '\n';

    const bool to_file = has_extension(cfg.out, ".csv");
    const fs::path csv_path = to_file ? cfg.out : cfg.out / (artifact_stem("scf", method, rho, seed) + ".csv");
    write_file_atomic(csv_path, csv.str());
    out << "evaluate-scf: method=" << method << " rho=" << format_double(rho) << " scf_error=" << format_double(err)
        << " -> " << csv_path.string() << '\n';

    fs::path json_path = csv_path;
    json_path.replace_extension(".json");
    json sidecar = design_provenance(cfg, geometry);
    sidecar["experiment"] = "scf";
    sidecar["grid"] = cfg.grid;
    sidecar["input"] = cfg.phi_path->string();
    sidecar["scf_error"] = err;
    write_file_atomic(json_path, dump_json(sidecar));
    out << "evaluate-scf: provenance -> " << json_path.string() << '\n';
    return exit_ok;
}

int run_evaluate_crb(const CliConfig &cfg, const ArrayGeometry &geometry, std::ostream &out)
{
    std::vector<NamedPhi> phis;
    for (const auto &input : cfg.crb_inputs)
    {
        const json doc = json::parse(read_text_file(input.path));
        NamedPhi named;
        named.name = input.name;
        if (doc.contains("phi"))
        {
            named.phi = doc.at("phi").get<CombiningMatrix>();
            if (doc.contains("config"))
                named.seed = doc.at("config").value("seed", std::uint64_t{0});
        }
        else
            named.phi = doc.get<CombiningMatrix>();
        phis.push_back(std::move(named));
    }
    CrbReport report = run_crb_experiment(geometry, std::move(phis), cfg.grid, cfg.noise_variance, cfg.separation,
                                          cfg.jobs, cfg.kinds);
    report.provenance["cli"] = cfg.provenance();
    const auto written = write_crb_artifacts(report, cfg.out);

    std::size_t k = 0;
    for (const auto &art : report.maps)
    {
        out << "evaluate-crb: " << art.method << ' ' << to_string(art.map.kind) << " valid=" << art.summary.valid_cells
            << '/' << art.map.cells.size() << " median_log10=" << format_double(art.summary.median_log10)
            << " var_log10=" << format_double(art.summary.variance_log10) << " -> " << written[k].string() << '\n';
        k += 2;
    }
    for (; k < written.size(); ++k)
        out << "evaluate-crb: wrote " << written[k].string() << '\n';
    return exit_ok;
}

int run_sweep(const CliConfig &cfg, const ArrayGeometry &geometry, std::ostream &out)
{
    SweepSpec spec;
    spec.compression_rates = cfg.rates;
    spec.seeds_per_point = cfg.seeds_per_point;
    spec.base_seed = cfg.seed;
    spec.methods = cfg.methods;
    spec.grid = cfg.grid;
    spec.optimizer = cfg.optimizer;
    spec.external_phi_paths = cfg.external;

    SweepReport report = run_scf_sweep(geometry, spec, cfg.jobs);
    report.provenance["cli"] = cfg.provenance();
    const auto written = write_sweep_artifacts(report, cfg.out);

    std::size_t k = 0;
    for (const auto &row : report.rows)
    {
        out << "sweep: " << row.method << " rho=" << format_double(row.rho) << " M=" << row.channels
            << " seed=" << row.seed << " scf_error=" << format_double(row.scf_error) << " status=" << row.status
            << " -> " << written[k].string() << '\n';
        k += 2;
    }
    for (; k < written.size(); ++k)
        out << "sweep: wrote " << written[k].string() << '\n';
    return exit_ok;
}

} // namespace

const char *to_string(Subcommand cmd)
{
    switch (cmd)
    {
    case Subcommand::design:
        return "design";
    case Subcommand::evaluate_scf:
        return "evaluate-scf";
    case Subcommand::evaluate_crb:
        return "evaluate-crb";
    case Subcommand::sweep:
        return "sweep";
    }
    return "unknown";
}

ArrayGeometry GeometrySpec::build() const
{
    if (file)
        return load_geometry(*file);
    return make_suca(stacks, per_stack, spacing_wl, radius_wl);
}

json CliConfig::provenance() const
{
    json geometry_json;
    if (geometry.file)
        geometry_json = json{{"file", geometry.file->string()}};
    else
        geometry_json = json{{"stacks", geometry.stacks},
                             {"per_stack", geometry.per_stack},
                             {"spacing_wl", geometry.spacing_wl},
                             {"radius_wl", geometry.radius_wl}};
    OptimizerConfig opt = optimizer;
    opt.seed = seed;

    json j{{"schema", config_schema},
           {"subcommand", to_string(subcommand)},
           {"geometry", std::move(geometry_json)},
           {"optimizer", opt},
           {"grid", grid},
           {"seed", seed},
           {"seed_source", seed_source}};
    switch (subcommand)
    {
    case Subcommand::design:
        j["design"] = json{{"channels", channels}};
        break;
    case Subcommand::evaluate_scf:
        j["evaluate"] = json{{"phi", phi_path ? phi_path->string() : ""}, {"method", method_label}};
        break;
    case Subcommand::evaluate_crb:
    {
        json inputs = json::object();
        for (const auto &in : crb_inputs)
            inputs[in.name] = in.path.string();
        json kind_names = json::array();
        for (auto k : kinds)
            kind_names.push_back(arrayforge::to_string(k));
        j["crb"] = json{{"noise_variance", noise_variance},
                        {"separation", separation},
                        {"kinds", std::move(kind_names)},
                        {"phi", std::move(inputs)}};
        break;
    }
    case Subcommand::sweep:
    {
        json method_names = json::array();
        for (auto m : methods)
            method_names.push_back(arrayforge::to_string(m));
        json ext = json::object();
        for (const auto &[m, path] : external)
            ext[std::to_string(m)] = path.string();
        j["sweep"] = json{{"compression_rates", rates},
                          {"seeds_per_point", seeds_per_point},
                          {"methods", std::move(method_names)},
                          {"external_phi_paths", std::move(ext)}};
        break;
    }
    }
    return j;
}

Environment process_environment()
{
    Environment env;
    if (const char *seed = std::getenv("ARRAYFORGE_SEED"))
        env["ARRAYFORGE_SEED"] = seed;
    return env;
}

CliConfig parse_and_validate(const std::vector<std::string> &args, const Environment &env)
{
    CLI::App app{"Combining network design and evaluation for compressive antenna arrays", "arrayforge"};
    app.require_subcommand(1);

    Flags f;
    CLI::App *design_cmd = app.add_subcommand("design", "Design a combining matrix by momentum SGD");
    CLI::App *scf_cmd = app.add_subcommand("evaluate-scf", "Grid SCF error of a combining matrix");
    CLI::App *crb_cmd = app.add_subcommand("evaluate-crb", "CRB maps for combining matrices");
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "SCF error versus compression rate");

    for (CLI::App *sub : {design_cmd, scf_cmd, crb_cmd, sweep_cmd})
        add_common(*sub, f);
    for (CLI::App *sub : {design_cmd, sweep_cmd})
        add_optimizer(*sub, f);
    for (CLI::App *sub : {scf_cmd, crb_cmd, sweep_cmd})
        add_grid(*sub, f);

    design_cmd->add_option("--channels", f.channels, "Output channels M");
    scf_cmd->add_option("--phi", f.phi, "Combining matrix or design trace JSON");
    scf_cmd->add_option("--method", f.method, "Method label for the output row");
    crb_cmd->add_option("--phi", f.crb_phis, "NAME=PATH of a combining matrix or design trace (repeatable)");
    crb_cmd->add_option("--sigma2", f.sigma2, "Noise variance");
    crb_cmd->add_option("--separation", f.separation, "Pair separation in radians");
    crb_cmd->add_option("--kinds", f.kinds, "Map kinds: single, azimuth-pair, elevation-pair")->delimiter(',');
    sweep_cmd->add_option("--rates", f.rates, "Compression rates rho = M/N")->delimiter(',');
    sweep_cmd->add_option("--seeds", f.seeds, "Seeds per rate");
    sweep_cmd->add_option("--methods", f.methods, "Methods: gaussian, sgd, external")->delimiter(',');
    sweep_cmd->add_option("--external", f.external, "M=PATH of an external combining matrix (repeatable)");

    std::vector<std::string> argv_storage{"arrayforge"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_storage)
        argv.push_back(s.data());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp &)
    {
        const CLI::App *target = &app;
        for (CLI::App *sub : {design_cmd, scf_cmd, crb_cmd, sweep_cmd})
            if (sub->parsed())
                target = sub;
        throw CliError(target->help(), exit_ok);
    }
    catch (const CLI::ParseError &e)
    {
        throw UsageError(e.what());
    }

    CliConfig cfg;
    if (design_cmd->parsed())
        cfg.subcommand = Subcommand::design;
    else if (scf_cmd->parsed())
        cfg.subcommand = Subcommand::evaluate_scf;
    else if (crb_cmd->parsed())
        cfg.subcommand = Subcommand::evaluate_crb;
    else
        cfg.subcommand = Subcommand::sweep;

    if (const auto it = env.find("ARRAYFORGE_SEED"); it != env.end())
    {
        try
        {
            std::size_t used = 0;
            cfg.seed = std::stoull(it->second, &used);
            if (used != it->second.size())
                throw std::invalid_argument(it->second);
        }
        catch (const std::exception &)
        {
            throw InvalidValueError("ARRAYFORGE_SEED='" + it->second + "' is not an unsigned integer");
        }
        cfg.seed_source = "env";
    }
    if (f.config_file)
        apply_config_file(cfg, *f.config_file);
    apply_flags(cfg, f);
    cfg.optimizer.seed = cfg.seed;
    validate(cfg);
    return cfg;
}

int run(const CliConfig &config, std::ostream &out, std::ostream &err)
{
    try
    {
        const ArrayGeometry geometry = config.geometry.build();
        switch (config.subcommand)
        {
        case Subcommand::design:
            return run_design(config, geometry, out);
        case Subcommand::evaluate_scf:
            return run_evaluate_scf(config, geometry, out);
        case Subcommand::evaluate_crb:
            return run_evaluate_crb(config, geometry, out);
        case Subcommand::sweep:
            return run_sweep(config, geometry, out);
        }
    }
    catch (const std::exception &e)
    {
        err << "arrayforge " << to_string(config.subcommand) << ": " << e.what() << '\n';
    }
    return exit_runtime;
}

int main_entry(const std::vector<std::string> &args, const Environment &env, std::ostream &out, std::ostream &err)
{
    CliConfig cfg;
    try
    {
        cfg = parse_and_validate(args, env);
    }
    catch (const CliError &e)
    {
        if (e.exit_code() == exit_ok)
        {
            out << e.what();
            return exit_ok;
        }
        err << "arrayforge: " << e.what() << '\n';
        return e.exit_code();
    }
    return run(cfg, out, err);
}

} // namespace arrayforge::cli
