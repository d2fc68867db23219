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

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace sparsemimo {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (master, indices...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = mix64(master);
    for (auto i : indices) h = mix64(h ^ mix64(i + 0x632be59bd9b4e019ULL));
    return h;
}

/// Circular complex Gaussian sample with E|z|^2 = power.
inline std::complex<double> complex_gaussian(Rng &rng, double power) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double s = std::sqrt(power / 2.0);
    const double re = n(rng);
    const double im = n(rng);
    return {s * re, s * im};
}

} // namespace sparsemimo
