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

#include "arrayforge/file_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

namespace arrayforge
{

void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());

    fs::path tmp = path;
    tmp += fmt::format(".tmp.{}", static_cast<long>(::getpid()));
    try
    {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            writer(out);
            out.flush();
            if (!out)
                throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
        fs::rename(tmp, path);
    }
    catch (...)
    {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content)
{
    write_file_atomic(path, [&](std::ostream &out) { out << content; });
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    return fmt::format("{}", value);
}

} // namespace arrayforge
