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

#include <benchmark/benchmark.h>

// The distro's benchmark_main archive carries LTO bytecode from another compiler
// release, so the entry point lives here.
BENCHMARK_MAIN();
