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

#include "sparsemimo/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sparsemimo {

enum class CoarrayKind { difference, sum };

/// Lags of a difference or sum co-array with their multiplicities.
///
/// Difference profiles are stored one-sided: lag l > 0 carries the number of
/// ordered pairs (i, j) with p_i - p_j = l, which equals the count for -l.
/// Lag 0 carries M. Sum profiles hold every p_i + p_j with its ordered-pair
/// count, so their weights add up to M^2.
struct LagProfile {
    CoarrayKind kind = CoarrayKind::difference;
    std::vector<int> lags;
    std::vector<std::int64_t> weights;
    int source_m = 0;

    /// Multiplicity of a lag (0 when absent). Negative lags are folded for
    /// difference profiles.
    std::int64_t weight_at(int lag) const;
    bool contains(int lag) const { return weight_at(lag) > 0; }
    int max_lag() const { return lags.empty() ? 0 : lags.back(); }
};

LagProfile difference_coarray(const ElementLayout &layout);
LagProfile sum_coarray(const ElementLayout &layout);

/// Largest L with {0, ..., L} contained in the lag set.
int max_contiguous(const LagProfile &profile);

/// Lags strictly between 0 and the maximal lag that are not realized.
std::vector<int> holes(const LagProfile &profile);

/// One-sided extent of the hole-free difference co-array segment.
int sensing_dof(const ElementLayout &layout);

/// CSV with header "lag,weight".
void write_profile_csv(std::ostream &os, const LagProfile &profile);

} // namespace sparsemimo
