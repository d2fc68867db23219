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
#include "sparsemimo/steering.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace sparsemimo {

/// Normalized far-field array gain sampled over the spatial-frequency offset
/// dtheta = sin(theta) - sin(theta0).
struct PatternCurve {
    std::vector<double> delta_theta;
    std::vector<double> gain;
};

struct FocusPoint {
    double range = 0.0; ///< meters
    double angle = 0.0; ///< radians from broadside
};

/// Near-field gain of a beam focused on `focus`, over ranges x angles.
/// gain is row-major: gain[i * angles.size() + j] belongs to (ranges[i], angles[j]).
struct FocusGrid {
    std::vector<double> ranges;
    std::vector<double> angles;
    std::vector<double> gain;
    FocusPoint focus;

    double at(std::size_t range_idx, std::size_t angle_idx) const {
        return gain[range_idx * angles.size() + angle_idx];
    }
};

/// Unit-norm beamforming codewords with their intended dtheta.
struct Codebook {
    std::vector<CVector> codewords;
    std::vector<double> steering_targets;
};

/// Uniformly spaced samples from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

PatternCurve farfield_pattern(const ElementLayout &layout, std::span<const double> grid);

/// Dirichlet kernel |sin(pi/2*M*dt) / (M*sin(pi/2*dt))| with the removable
/// singularities at dt = 0, +-2 evaluated as 1.
double closed_form_compact_pattern(int m, double delta_theta);

/// Offset of the first null right of dtheta = 0: the first sample with gain
/// below 1e-6, or the first local minimum below 0.05.
double angular_resolution(const PatternCurve &curve);

/// Offset of the first local minimum right of dtheta = 0, however shallow.
/// Sparse layouts such as MRA-6 have no deep null; this bounds their main lobe.
double mainlobe_edge(const PatternCurve &curve);

/// Offsets +-2k/eta within |dtheta| <= bound where a USA returns to unit gain.
std::vector<double> grating_lobe_positions(double eta, double bound);

struct SidelobePeak {
    double level = 0.0;
    double location = 0.0;
    double psllr() const { return 1.0 / level; }
};

/// Highest gain with |dtheta| >= mainlobe_exclusion. Ties go to the smallest
/// |dtheta|.
SidelobePeak peak_sidelobe(const PatternCurve &curve, double mainlobe_exclusion);

FocusGrid nearfield_focus_pattern(const ElementLayout &layout, double wavelength, FocusPoint focus,
                                  std::span<const double> ranges, std::span<const double> angles);

/// Contiguous range interval at the focus angle where gain >= 1/sqrt(2).
/// Open ends are reported as r_lo = 0 and r_hi = +inf.
struct DepthInterval {
    double r_lo = 0.0;
    double r_hi = 0.0;
    bool lower_bounded() const { return r_lo > 0.0; }
    bool upper_bounded() const;
};

DepthInterval depth_3db(const FocusGrid &grid);

/// Codewords of an (A+1)-point DFT over the virtual compact aperture 0..A,
/// restricted to the layout's elements and renormalized.
Codebook dft_hollow_codebook(const ElementLayout &layout);

/// min over grid of max over codewords of |w^H a(dtheta)| / sqrt(M).
double codebook_coverage(const Codebook &cb, const ElementLayout &layout, std::span<const double> grid);

/// Gain in dB (20 log10), floored at floor_db.
double gain_db(double gain, double floor_db = -300.0);

void write_pattern_csv(std::ostream &os, const PatternCurve &curve, bool in_db = false);
void write_focus_csv(std::ostream &os, const FocusGrid &grid, bool in_db = false, double floor_db = -40.0);

} // namespace sparsemimo
