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

#include "sparsemimo/patterns.hpp"
#include "sparsemimo/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sparsemimo {

namespace {
constexpr double null_threshold = 1e-6;
constexpr double local_min_threshold = 0.05;
} // namespace

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

PatternCurve farfield_pattern(const ElementLayout &layout, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("pattern grid is empty");
    PatternCurve curve;
    curve.delta_theta.assign(grid.begin(), grid.end());
    std::sort(curve.delta_theta.begin(), curve.delta_theta.end());
    if (curve.delta_theta.front() < -2.0 || curve.delta_theta.back() > 2.0)
        throw std::invalid_argument("pattern grid must lie within [-2, 2]");
    curve.gain.resize(curve.delta_theta.size());
    const double inv_m = 1.0 / static_cast<double>(layout.size());
    for (std::size_t i = 0; i < curve.delta_theta.size(); ++i) {
        const double dt = curve.delta_theta[i];
        double re = 0.0, im = 0.0;
        for (double p : layout.positions()) {
            const double phase = std::numbers::pi * p * dt;
            re += std::cos(phase);
            im += std::sin(phase);
        }
        curve.gain[i] = std::hypot(re, im) * inv_m;
    }
    return curve;
}

double closed_form_compact_pattern(int m, double delta_theta) {
    if (m < 2) throw std::invalid_argument("closed-form pattern needs M >= 2");
    // Reduce by the period 2 of |.| so the singular points map to 0 exactly.
    const double reduced = delta_theta - 2.0 * std::round(delta_theta / 2.0);
    if (reduced == 0.0) return 1.0;
    const double x = std::numbers::pi / 2.0 * reduced;
    return std::abs(std::sin(m * x) / (m * std::sin(x)));
}

namespace {

/// First sample right of dtheta = 0 that is a local minimum with gain below
/// `ceiling` (or below the null threshold).
double first_minimum(const PatternCurve &curve, double ceiling) {
    const auto &dt = curve.delta_theta;
    const auto &g = curve.gain;
    if (dt.size() < 3) throw std::invalid_argument("pattern curve too short");
    std::size_t origin = 0;
    for (std::size_t i = 1; i < dt.size(); ++i)
        if (std::abs(dt[i]) < std::abs(dt[origin])) origin = i;
    for (std::size_t i = origin + 1; i < dt.size(); ++i) {
        if (g[i] < null_threshold) return dt[i] - dt[origin];
        const bool local_min = i + 1 < dt.size() && g[i] <= g[i - 1] && g[i] < g[i + 1];
        if (local_min && g[i] < ceiling) return dt[i] - dt[origin];
    }
    throw std::runtime_error("no null found right of the main lobe");
}

} // namespace

double angular_resolution(const PatternCurve &curve) { return first_minimum(curve, local_min_threshold); }

double mainlobe_edge(const PatternCurve &curve) { return first_minimum(curve, 1.0); }

std::vector<double> grating_lobe_positions(double eta, double bound) {
    std::vector<double> out;
    if (!(eta > 1.0)) return out;
    for (int k = 1;; ++k) {
        const double pos = 2.0 * k / eta;
        if (pos > bound + 1e-12) break;
        out.push_back(pos);
        out.push_back(-pos);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SidelobePeak peak_sidelobe(const PatternCurve &curve, double mainlobe_exclusion) {
    SidelobePeak best{-1.0, 0.0};
    for (std::size_t i = 0; i < curve.delta_theta.size(); ++i) {
        const double dt = curve.delta_theta[i];
        if (std::abs(dt) < mainlobe_exclusion) continue;
        const double g = curve.gain[i];
        const bool higher = g > best.level + 1e-12;
        const bool tie_closer = std::abs(g - best.level) <= 1e-12 && std::abs(dt) < std::abs(best.location);
        if (best.level < 0.0 || higher || tie_closer) best = {g, dt};
    }
    if (best.level < 0.0) throw std::invalid_argument("main-lobe exclusion leaves no samples");
    return best;
}

FocusGrid nearfield_focus_pattern(const ElementLayout &layout, double wavelength, FocusPoint focus,
                                  std::span<const double> ranges, std::span<const double> angles) {
    if (ranges.empty() || angles.empty()) throw std::invalid_argument("focus grid is empty");
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    const double span = aperture(layout, ApertureConvention::span, wavelength);
    for (double r : ranges) {
        if (!(r > 0.0)) throw std::invalid_argument("focus grid ranges must be positive");
        if (!(r > span)) throw std::invalid_argument("focus grid ranges must exceed the array span");
    }
    if (!(focus.range > 0.0)) throw std::invalid_argument("focus range must be positive");

    const CVector weights = steer_near(layout, wavelength, focus.range, focus.angle);
    const double inv_m = 1.0 / static_cast<double>(layout.size());
    FocusGrid grid;
    grid.ranges.assign(ranges.begin(), ranges.end());
    grid.angles.assign(angles.begin(), angles.end());
    grid.focus = focus;
    grid.gain.resize(ranges.size() * angles.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
        for (std::size_t j = 0; j < angles.size(); ++j) {
            const CVector a = steer_near(layout, wavelength, ranges[i], angles[j]);
            grid.gain[i * angles.size() + j] = std::abs(weights.dot(a)) * inv_m;
        }
    return grid;
}

bool DepthInterval::upper_bounded() const { return std::isfinite(r_hi); }

DepthInterval depth_3db(const FocusGrid &grid) {
    auto angle_it = std::find_if(grid.angles.begin(), grid.angles.end(),
                                 [&](double a) { return std::abs(a - grid.focus.angle) <= 1e-12; });
    if (angle_it == grid.angles.end()) throw std::invalid_argument("focus angle is not on the angle grid");
    const auto j = static_cast<std::size_t>(angle_it - grid.angles.begin());

    std::size_t center = 0;
    for (std::size_t i = 1; i < grid.ranges.size(); ++i)
        if (std::abs(grid.ranges[i] - grid.focus.range) < std::abs(grid.ranges[center] - grid.focus.range))
            center = i;

    const double threshold = 1.0 / std::numbers::sqrt2;
    std::size_t lo = center, hi = center;
    while (lo > 0 && grid.at(lo - 1, j) >= threshold) --lo;
    while (hi + 1 < grid.ranges.size() && grid.at(hi + 1, j) >= threshold) ++hi;

    DepthInterval out;
    out.r_lo = lo == 0 ? 0.0 : grid.ranges[lo];
    out.r_hi = hi + 1 == grid.ranges.size() ? std::numeric_limits<double>::infinity() : grid.ranges[hi];
    // The focus itself always belongs to the interval.
    out.r_lo = std::min(out.r_lo, grid.focus.range);
    out.r_hi = std::max(out.r_hi, grid.focus.range);
    return out;
}

Codebook dft_hollow_codebook(const ElementLayout &layout) {
    const auto pos = integer_positions(layout);
    const int bins = pos.back() + 1;
    const double norm = 1.0 / std::sqrt(static_cast<double>(pos.size()));
    Codebook cb;
    cb.codewords.reserve(static_cast<std::size_t>(bins));
    for (int n = 0; n < bins; ++n) {
        CVector w(static_cast<Eigen::Index>(pos.size()));
        for (std::size_t m = 0; m < pos.size(); ++m) {
            // n * p mod bins keeps the phase argument small and exact
            const long long k = (static_cast<long long>(n) * pos[m]) % bins;
            w[static_cast<Eigen::Index>(m)] = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(k) / bins);
        }
        cb.codewords.push_back(std::move(w));
        double target = 2.0 * n / bins;
        if (target >= 1.0) target -= 2.0;
        cb.steering_targets.push_back(target);
    }
    return cb;
}

double codebook_coverage(const Codebook &cb, const ElementLayout &layout, std::span<const double> grid) {
    if (cb.codewords.empty() || grid.empty()) throw std::invalid_argument("codebook and grid must be non-empty");
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(layout.size()));
    double worst = std::numeric_limits<double>::infinity();
    for (double dt : grid) {
        const CVector a = steer_far_sin(layout, dt);
        double best = 0.0;
        for (const auto &w : cb.codewords) best = std::max(best, std::abs(w.dot(a)) * inv_sqrt_m);
        worst = std::min(worst, best);
    }
    return worst;
}

double gain_db(double gain, double floor_db) {
    if (gain <= 0.0) return floor_db;
    return std::max(floor_db, 20.0 * std::log10(gain));
}

void write_pattern_csv(std::ostream &os, const PatternCurve &curve, bool in_db) {
    os << (in_db ? "delta_theta,gain_db\n" : "delta_theta,gain\n");
    for (std::size_t i = 0; i < curve.delta_theta.size(); ++i)
        os << format_number(curve.delta_theta[i]) << ','
           << format_number(in_db ? gain_db(curve.gain[i]) : curve.gain[i]) << '\n';
}

void write_focus_csv(std::ostream &os, const FocusGrid &grid, bool in_db, double floor_db) {
    os << (in_db ? "range_m,angle_rad,gain_db\n" : "range_m,angle_rad,gain\n");
    for (std::size_t i = 0; i < grid.ranges.size(); ++i)
        for (std::size_t j = 0; j < grid.angles.size(); ++j) {
            const double g = grid.at(i, j);
            os << format_number(grid.ranges[i]) << ',' << format_number(grid.angles[j]) << ','
               << format_number(in_db ? gain_db(g, floor_db) : g) << '\n';
        }
}

} // namespace sparsemimo
