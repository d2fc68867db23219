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

#include "sparsemimo/steering.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsemimo {

CVector steer_far_sin(const ElementLayout &layout, double u) {
    CVector a(static_cast<Eigen::Index>(layout.size()));
    for (std::size_t m = 0; m < layout.size(); ++m)
        a[static_cast<Eigen::Index>(m)] = std::polar(1.0, std::numbers::pi * layout[m] * u);
    return a;
}

CVector steer_far(const ElementLayout &layout, double angle) { return steer_far_sin(layout, std::sin(angle)); }

double path_excess(double x_m, double range, double angle) {
    // r_m - r = (x^2 - 2 r x sin(theta)) / (r_m + r)
    const double num = x_m * x_m - 2.0 * range * x_m * std::sin(angle);
    const double r_m = std::sqrt(range * range + num);
    return num / (r_m + range);
}

CVector steer_near(const ElementLayout &layout, double wavelength, double range, double angle) {
    if (!(range > 0.0)) throw std::invalid_argument("steering range must be positive");
    if (std::isinf(range)) return steer_far(layout, angle);
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double d0 = wavelength / 2.0;
    CVector a(static_cast<Eigen::Index>(layout.size()));
    for (std::size_t m = 0; m < layout.size(); ++m)
        a[static_cast<Eigen::Index>(m)] = std::polar(1.0, -k * path_excess(layout[m] * d0, range, angle));
    return a;
}

} // namespace sparsemimo
