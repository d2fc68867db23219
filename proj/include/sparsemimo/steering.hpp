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

#include <Eigen/Dense>

#include <complex>

namespace sparsemimo {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Far-field steering vector, [a]_m = exp(j*pi*p_m*u) with u = sin(angle).
CVector steer_far_sin(const ElementLayout &layout, double u);
CVector steer_far(const ElementLayout &layout, double angle);

/// Exact distance from the element at x_m (meters, along the array axis) to
/// a point at range r from the origin and angle theta from broadside, minus r.
/// Evaluated in a cancellation-free form.
double path_excess(double x_m, double range, double angle);

/// Near-field steering vector with spherical wavefronts,
/// [a]_m = exp(-j*2*pi/lambda*(r_m - r)). An infinite range yields steer_far.
CVector steer_near(const ElementLayout &layout, double wavelength, double range, double angle);

} // namespace sparsemimo
