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

#include <string>
#include <string_view>
#include <vector>

namespace sparsemimo {

/// Shortest decimal text that round-trips to the same double ('.' separator,
/// locale independent).
std::string format_number(double value);

/// Parse a full string as a double / integer; throws std::invalid_argument.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

} // namespace sparsemimo
