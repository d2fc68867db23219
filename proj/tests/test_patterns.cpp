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

#include "oracles.hpp"

#include <sparsemimo/geometry.hpp>
#include <sparsemimo/patterns.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace sparsemimo;
using std::numbers::pi;

namespace {

std::vector<double> pos(const ElementLayout &l) { return {l.positions().begin(), l.positions().end()}; }

double gain_at(const ElementLayout &l, double dt) {
    const double g[] = {dt};
    return farfield_pattern(l, g).gain[0];
}

const double kLambda = wavelength_for(28e9);

} // namespace

TEST_SUITE("patterns") {

TEST_CASE("far-field examples") {
    for (const auto &l : {make_compact(16), make_nested(3, 3), make_usa(7, 2.3)}) CHECK(gain_at(l, 0.0) == 1.0);
    CHECK(gain_at(make_compact(16), 0.125) < 1e-12);
    CHECK(gain_at(make_usa(16, 4), 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(farfield_pattern(make_compact(4), std::vector<double>{}));
    CHECK_THROWS(farfield_pattern(make_compact(4), std::vector<double>{2.5}));
}

TEST_CASE("closed-form compact pattern") {
    CHECK(closed_form_compact_pattern(16, 0.0) == 1.0);
    CHECK(std::abs(closed_form_compact_pattern(16, 0.125)) < 1e-12);
    CHECK(std::abs(closed_form_compact_pattern(2, 1.0)) < 1e-12);
    CHECK(closed_form_compact_pattern(8, 2.0) == doctest::Approx(1.0));
    for (int m : {2, 4, 8, 16, 64, 128}) {
        const auto grid = linspace(-2, 2, 4096);
        const auto curve = farfield_pattern(make_compact(m), grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(curve.gain[i] - closed_form_compact_pattern(m, grid[i])));
            CHECK(std::abs(closed_form_compact_pattern(m, grid[i]) - oracle::dirichlet(m, grid[i])) < 1e-12);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("pattern matches direct summation and is even") {
    const auto grid = linspace(-2, 2, 801);
    for (const auto &l : {make_nested(4, 5), make_coprime(5, 4), make_mra(9), make_usa(10, 4.1), make_moa(3, 3, 7.5)}) {
        const auto curve = farfield_pattern(l, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(curve.gain[i] - oracle::pattern(pos(l), grid[i])) < 1e-12);
            CHECK(std::abs(curve.gain[i] - curve.gain[grid.size() - 1 - i]) < 1e-12);
            CHECK(curve.gain[i] <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("angular resolution") {
    const auto grid = linspace(-1, 1, 20001);
    CHECK(std::abs(angular_resolution(farfield_pattern(make_compact(16), grid)) - 0.125) <= 1e-4);
    CHECK(std::abs(angular_resolution(farfield_pattern(make_usa(16, 4), grid)) - 0.03125) <= 1e-4);
    CHECK(std::abs(angular_resolution(farfield_pattern(make_moa(4, 4, 8), grid)) - 0.0625) <= 1e-4);
    for (int m : {4, 8, 32})
        for (double eta : {1.0, 2.0, 3.0}) {
            const double expect = 2.0 / (eta * m);
            CHECK(std::abs(angular_resolution(farfield_pattern(make_usa(m, eta), grid)) - expect) <= 1e-4);
        }
}

TEST_CASE("grating lobes") {
    CHECK(grating_lobe_positions(4, 2) == std::vector<double>{-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0});
    CHECK(grating_lobe_positions(1, 2).empty());
    CHECK(grating_lobe_positions(2, 2) == std::vector<double>{-2.0, -1.0, 1.0, 2.0});
    for (double eta : {2.0, 3.0, 4.0, 5.0})
        for (double d : grating_lobe_positions(eta, 2.0)) CHECK(gain_at(make_usa(16, eta), d) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("peak sidelobe") {
    const auto grid = linspace(-1, 1, 200001);
    const auto ca = peak_sidelobe(farfield_pattern(make_compact(16), grid), 0.125);
    // Brute force on the Dirichlet kernel gives 0.22012 at 0.17902; 0.2172 is the large-M limit.
    double ref = 0.0, where = 0.0;
    for (int i = 0; i <= 875000; ++i) {
        const double x = 0.125 + i * 1e-6;
        if (oracle::dirichlet(16, x) > ref) ref = oracle::dirichlet(16, x), where = x;
    }
    CHECK(ca.level == doctest::Approx(ref).epsilon(1e-6));
    CHECK(std::abs(std::abs(ca.location) - where) < 1e-5);
    CHECK(ca.level == doctest::Approx(0.2172).epsilon(0.02));
    CHECK(std::abs(std::abs(ca.location) - 0.187) < 0.01);
    CHECK(ca.psllr() == doctest::Approx(1.0 / ca.level));

    const auto usa = peak_sidelobe(farfield_pattern(make_usa(16, 4), grid), 0.03125);
    CHECK(usa.level == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(usa.location) == doctest::Approx(0.5).epsilon(1e-9));

    const auto mra_curve = farfield_pattern(make_mra(6), grid);
    CHECK_THROWS(angular_resolution(mra_curve));
    CHECK(mainlobe_edge(mra_curve) == doctest::Approx(0.1098).epsilon(1e-3));
    CHECK(peak_sidelobe(mra_curve, mainlobe_edge(mra_curve)).level < 1.0);
    CHECK_THROWS(peak_sidelobe(farfield_pattern(make_compact(4), linspace(-0.1, 0.1, 11)), 0.5));
}

TEST_CASE("near-field focusing") {
    const auto ca = make_compact(128);
    const auto usa = make_usa(128, 4.1);
    const FocusPoint focus{200.0, 0.0};
    const std::vector<double> ranges{200.0, 10000.0};
    const std::vector<double> angles{0.0};
    const auto gca = nearfield_focus_pattern(ca, kLambda, focus, ranges, angles);
    CHECK(gca.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gca.at(1, 0) > 0.9);
    const auto gusa = nearfield_focus_pattern(usa, kLambda, focus, ranges, angles);
    CHECK(gusa.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gusa.at(1, 0) < 0.5);

    // Direct summation oracle at an off-focus cell.
    const auto xs = usa.positions_m(kLambda);
    std::complex<double> s{};
    for (double x : xs)
        s += std::polar(1.0, 2 * pi / kLambda * (oracle::excess(x, 10000.0, 0.0) - oracle::excess(x, 200.0, 0.0)));
    CHECK(gusa.at(1, 0) == doctest::Approx(std::abs(s) / 128).epsilon(1e-9));

    CHECK_THROWS(nearfield_focus_pattern(ca, kLambda, focus, std::vector<double>{-1.0}, angles));
    CHECK_THROWS(nearfield_focus_pattern(ca, kLambda, focus, std::vector<double>{}, angles));
}

TEST_CASE("near-field pattern approaches the far-field one at long range") {
    const auto l = make_nested(4, 4);
    const double span = l.max_position() * kLambda / 2;
    const double r = 1e6 * span;
    for (double theta : {-0.6, -0.1, 0.3, 0.9}) {
        const std::vector<double> ranges{r};
        const std::vector<double> angles{theta};
        const auto g = nearfield_focus_pattern(l, kLambda, {r, 0.2}, ranges, angles);
        CHECK(std::abs(g.gain[0] - gain_at(l, std::sin(theta) - std::sin(0.2))) < 1e-3);
    }
}

TEST_CASE("3-dB focusing depth") {
    const FocusPoint focus{200.0, 0.0};
    std::vector<double> ranges;
    for (int i = 0; i < 200; ++i) ranges.push_back(50.0 * std::pow(200.0, i / 199.0));
    ranges.push_back(200.0);
    std::sort(ranges.begin(), ranges.end());
    const std::vector<double> angles{-0.1, 0.0, 0.1};
    const auto dca = depth_3db(nearfield_focus_pattern(make_compact(128), kLambda, focus, ranges, angles));
    CHECK_FALSE(dca.upper_bounded());
    CHECK(dca.r_lo <= 200.0);
    const auto dusa = depth_3db(nearfield_focus_pattern(make_usa(128, 4.1), kLambda, focus, ranges, angles));
    CHECK(dusa.upper_bounded());
    CHECK(dusa.lower_bounded());
    CHECK(dusa.r_lo < 200.0);
    CHECK(dusa.r_hi > 200.0);
    const std::vector<double> off{0.05};
    CHECK_THROWS(depth_3db(nearfield_focus_pattern(make_compact(8), kLambda, focus, ranges, off)));
}

TEST_CASE("hollow DFT codebooks") {
    const auto ca = dft_hollow_codebook(make_compact(8));
    REQUIRE(ca.codewords.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(ca.codewords[i].norm() - 1.0) < 1e-12);
        for (std::size_t j = i + 1; j < 8; ++j) CHECK(std::abs(ca.codewords[i].dot(ca.codewords[j])) < 1e-12);
    }
    const auto usa = dft_hollow_codebook(make_usa(4, 2));
    CHECK(usa.codewords.size() == 7);
    CHECK(usa.codewords[0].size() == 4);
    CHECK(std::abs(usa.codewords[0].dot(usa.codewords[1])) > 1e-3);
    const auto na = dft_hollow_codebook(make_nested(3, 3));
    CHECK(na.codewords.size() == 12);
    CHECK(na.codewords[0].size() == 6);
    for (const auto &w : na.codewords) CHECK(std::abs(w.norm() - 1.0) < 1e-12);
    CHECK_THROWS(dft_hollow_codebook(make_usa(4, 4.1)));
}

TEST_CASE("codebook coverage") {
    const auto l = make_compact(8);
    CHECK(codebook_coverage(dft_hollow_codebook(l), l, linspace(-1, 1, 4001)) >= 2 / pi - 0.05);
    Codebook single;
    single.codewords.push_back(steer_far_sin(l, 0.3) / std::sqrt(8.0));
    single.steering_targets.push_back(0.3);
    CHECK(codebook_coverage(single, l, std::vector<double>{0.3}) == doctest::Approx(1.0).epsilon(1e-12));
    const auto usa = make_usa(8, 4);
    const double w = codebook_coverage(dft_hollow_codebook(usa), usa, linspace(-1, 1, 2001));
    CHECK(w > 0.0);
    CHECK(w <= 1.0 + 1e-9);
    CHECK_THROWS(codebook_coverage(Codebook{}, l, std::vector<double>{0.0}));
}

} // TEST_SUITE
