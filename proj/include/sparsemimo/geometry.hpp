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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sparsemimo {

/// Speed of light in vacuum [m/s].
inline constexpr double speed_of_light = 299792458.0;

/// Wavelength [m] for a carrier frequency [Hz].
double wavelength_for(double carrier_hz);

enum class Architecture { compact, usa, moa, nested, coprime, mra, emra, custom };

std::string_view architecture_name(Architecture arch);

/// Ordered element positions of a linear array, in units of d0 = lambda/2.
///
/// The first element sits at the origin and positions are strictly
/// increasing. The label is a parseable architecture spec such as
/// "usa(m=32,eta=4.1)"; make_layout(label) rebuilds the same layout for every
/// generator-built layout.
class ElementLayout {
  public:
    ElementLayout(std::vector<double> positions, Architecture arch, std::string label);

    std::span<const double> positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    double operator[](std::size_t i) const { return positions_[i]; }
    double max_position() const { return positions_.back(); }
    Architecture architecture() const { return arch_; }
    const std::string &label() const { return label_; }

    /// Positions in meters for the given wavelength.
    std::vector<double> positions_m(double wavelength) const;

    friend bool operator==(const ElementLayout &a, const ElementLayout &b) {
        return a.positions_ == b.positions_;
    }

  private:
    std::vector<double> positions_;
    Architecture arch_;
    std::string label_;
};

ElementLayout make_compact(int m);
ElementLayout make_usa(int m, double eta);
ElementLayout make_moa(int n_modules, int module_size, double module_spacing);
ElementLayout make_nested(int m_inner, int m_outer);
ElementLayout make_coprime(int m_first, int m_second);

/// Minimum-redundancy array with a hole-free difference co-array of maximal
/// extent. Supported for 3 <= m <= 16.
ElementLayout make_mra(int m);

/// All hole-free integer layouts of m elements with the largest contiguous
/// difference co-array whose aperture does not exceed max_aperture. Mirror
/// images are reported once (the one whose first gap is smaller). m <= 8.
std::vector<ElementLayout> mra_search(int m, int max_aperture);

/// n_sub copies of make_mra(sub_m), copy k shifted by k * (L_sub + 1).
ElementLayout make_emra(int n_sub, int sub_m);

/// Arbitrary validated layout (positions in d0 units).
ElementLayout make_custom(std::vector<double> positions);

/// First `count` elements of a layout.
ElementLayout leading_subarray(const ElementLayout &layout, std::size_t count);

/// Builds a layout from a spec string, e.g. "ca(m=16)", "usa(m=32,eta=4.1)",
/// "moa(n=4,m=4,gamma=8)", "na(min=3,mou=3)", "cpa(mf=4,ms=3)", "mra(m=6)",
/// "emra(n=8,m=16)" or "custom(0;1;4;6)". Throws std::invalid_argument.
ElementLayout make_layout(std::string_view spec);

enum class ApertureConvention { span, count };

/// Physical aperture in meters. span: (max - min) * lambda/2.
/// count: M * mean adjacent gap * lambda/2.
double aperture(const ElementLayout &layout, ApertureConvention conv, double wavelength);

/// True iff every position lies within tol of an integer.
bool on_integer_grid(const ElementLayout &layout, double tol = 1e-9);

/// Integer positions; throws std::invalid_argument off the integer grid.
std::vector<int> integer_positions(const ElementLayout &layout, double tol = 1e-9);

/// True iff adjacent gaps are all equal within tol.
bool is_uniform(const ElementLayout &layout, double tol = 1e-9);

/// One header line "# <label>" followed by one position per line.
void write_layout(std::ostream &os, const ElementLayout &layout);
ElementLayout read_layout(std::istream &is);

} // namespace sparsemimo
