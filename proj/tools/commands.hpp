// SPDX-License-Identifier: Apache-2.0
//
// sparsemimo: sparse linear array geometries, co-arrays, beam patterns and
// direction finding for multi-user ISAC simulation
// Copyright (C) 2026 The sparsemimo authors
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

#include "settings.hpp"

#include <string>
#include <vector>

namespace sparsemimo::cli {

struct OutputFile {
    std::string name; ///< relative to the output directory
    std::string content;
};

/// Everything a command produces; nothing touches the disk until the whole
/// run has succeeded.
struct CommandResult {
    std::vector<OutputFile> files;
    std::string summary; ///< printed to stdout after the files are written
};

CommandResult run_command(Command cmd, const Settings &settings, int jobs);

} // namespace sparsemimo::cli
