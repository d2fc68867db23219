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

#include "sparsemimo/coarray.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace sparsemimo {

namespace {

LagProfile from_counts(const std::map<int, std::int64_t> &counts, CoarrayKind kind, int m) {
    LagProfile profile;
    profile.kind = kind;
    profile.source_m = m;
    profile.lags.reserve(counts.size());
    profile.weights.reserve(counts.size());
    for (const auto &[lag, w] : counts) {
        profile.lags.push_back(lag);
        profile.weights.push_back(w);
    }
    return profile;
}

} // namespace

std::int64_t LagProfile::weight_at(int lag) const {
    if (kind == CoarrayKind::difference && lag < 0) lag = -lag;
    auto it = std::lower_bound(lags.begin(), lags.end(), lag);
    if (it == lags.end() || *it != lag) return 0;
    return weights[static_cast<std::size_t>(it - lags.begin())];
}

LagProfile difference_coarray(const ElementLayout &layout) {
    const auto pos = integer_positions(layout);
    std::map<int, std::int64_t> counts;
    for (int pi : pos)
        for (int pj : pos)
            if (pi >= pj) ++counts[pi - pj];
    return from_counts(counts, CoarrayKind::difference, static_cast<int>(pos.size()));
}

LagProfile sum_coarray(const ElementLayout &layout) {
    const auto pos = integer_positions(layout);
    std::map<int, std::int64_t> counts;
    for (int pi : pos)
        for (int pj : pos) ++counts[pi + pj];
    return from_counts(counts, CoarrayKind::sum, static_cast<int>(pos.size()));
}

int max_contiguous(const LagProfile &profile) {
    if (profile.lags.empty() || profile.lags.front() != 0) return 0;
    int extent = 0;
    for (std::size_t i = 1; i < profile.lags.size() && profile.lags[i] == extent + 1; ++i) ++extent;
    return extent;
}

std::vector<int> holes(const LagProfile &profile) {
    std::vector<int> out;
    std::size_t idx = 0;
    for (int lag = 1; lag < profile.max_lag(); ++lag) {
        while (idx < profile.lags.size() && profile.lags[idx] < lag) ++idx;
        if (idx == profile.lags.size() || profile.lags[idx] != lag) out.push_back(lag);
    }
    return out;
}

int sensing_dof(const ElementLayout &layout) { return max_contiguous(difference_coarray(layout)); }

void write_profile_csv(std::ostream &os, const LagProfile &profile) {
    os << "lag,weight\n";
    for (std::size_t i = 0; i < profile.lags.size(); ++i) os << profile.lags[i] << ',' << profile.weights[i] << '\n';
}

} // namespace sparsemimo
