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
#include <functional>
#include <ostream>
#include <string>

namespace arrayforge
{

/// Writes through `writer` into a temporary sibling of `path`, then renames
/// it over `path`. If the writer throws, the temporary is removed and `path`
/// is left untouched.
void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer);

void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Throws std::runtime_error when the file cannot be opened.
std::string read_text_file(const std::filesystem::path &path);

/// Shortest round-trip decimal representation; "nan" for NaN.
std::string format_double(double value);

} // namespace arrayforge
