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

#include <filesystem>

#include "json.hpp"

#include "arrayforge/array_model.hpp"
#include "arrayforge/scf_objective.hpp"
#include "arrayforge/sgd_designer.hpp"

namespace arrayforge
{

using json = nlohmann::json;

// {"positions": [[x, y, z], ...]} in wavelengths
void to_json(json &j, const ArrayGeometry &geometry);
ArrayGeometry geometry_from_json(const json &j);

// {"rows": M, "cols": N, "re": [[...]], "im": [[...]]}, row-major
void to_json(json &j, const CombiningMatrix &phi);
void from_json(const json &j, CombiningMatrix &phi);

void to_json(json &j, const AngleRange &range);
void from_json(const json &j, AngleRange &range);

void to_json(json &j, const ScfGrid &grid);
void from_json(const json &j, ScfGrid &grid);

void to_json(json &j, const OptimizerConfig &config);
void from_json(const json &j, OptimizerConfig &config);

void to_json(json &j, const DesignTrace &trace);
void from_json(const json &j, DesignTrace &trace);

/// Loads a combining matrix from either a bare matrix document or a design
/// trace (its "phi" member).
CombiningMatrix load_combining_matrix(const std::filesystem::path &path);

ArrayGeometry load_geometry(const std::filesystem::path &path);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const json &j);

} // namespace arrayforge
