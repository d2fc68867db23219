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

#include <sparsemimo/coarray.hpp>
#include <sparsemimo/geometry.hpp>

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace sparsemimo;
using V = std::vector<double>;

namespace {

V pos(const ElementLayout &l) { return {l.positions().begin(), l.positions().end()}; }

void check_invariants(const ElementLayout &l) {
    REQUIRE(l.size() >= 2);
    CHECK(l[0] == 0.0);
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] > l[i - 1]);
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("compact and uniform sparse arrays") {
    CHECK(pos(make_compact(4)) == V{0, 1, 2, 3});
    CHECK(pos(make_compact(6)) == V{0, 1, 2, 3, 4, 5});
    CHECK(make_compact(128).max_position() == 127.0);
    CHECK(pos(make_usa(4, 2.0)) == V{0, 2, 4, 6});
    CHECK(make_usa(6, 1.0) == make_compact(6));
    CHECK(make_usa(32, 4.1).max_position() == doctest::Approx(127.1).epsilon(1e-14));
    CHECK_THROWS(make_usa(4, 0.5));
}

TEST_CASE("modular arrays") {
    CHECK(pos(make_moa(2, 3, 6)) == V{0, 1, 2, 6, 7, 8});
    CHECK(make_moa(1, 4, 4) == make_compact(4));
    const auto moa = make_moa(4, 4, 8);
    CHECK(moa.size() == 16);
    CHECK(moa.max_position() == 27.0);
    for (int n : {1, 2, 5})
        for (int m : {2, 3, 4}) CHECK(make_moa(n, m, m) == make_compact(n * m));
}

TEST_CASE("nested arrays") {
    CHECK(pos(make_nested(3, 3)) == V{0, 1, 2, 3, 7, 11});
    CHECK(pos(make_nested(1, 1)) == V{0, 1});
    const auto na = make_nested(8, 8);
    CHECK(na.size() == 16);
    CHECK(na.max_position() == 71.0);
}

TEST_CASE("coprime arrays") {
    CHECK(pos(make_coprime(4, 3)) == V{0, 3, 4, 6, 8, 9});
    CHECK(pos(make_coprime(2, 3)) == V{0, 2, 3, 4});
    CHECK_THROWS(make_coprime(4, 2));
    for (int a = 2; a <= 9; ++a)
        for (int b = 2; b <= 9; ++b)
            if (std::gcd(a, b) == 1) CHECK(make_coprime(a, b).size() == static_cast<std::size_t>(a + b - 1));
}

TEST_CASE("minimum redundancy arrays") {
    CHECK(pos(make_mra(6)) == V{0, 1, 6, 9, 11, 13});
    CHECK(pos(make_mra(3)) == V{0, 1, 3});
    CHECK(pos(make_mra(4)) == V{0, 1, 4, 6});
    for (int m = 3; m <= 16; ++m) {
        const auto mra = make_mra(m);
        check_invariants(mra);
        CHECK(mra.size() == static_cast<std::size_t>(m));
        CHECK(holes(difference_coarray(mra)).empty());
        CHECK(max_contiguous(difference_coarray(mra)) == static_cast<int>(mra.max_position()));
    }
    // Known optimal apertures of restricted MRAs.
    const int optimal[] = {0, 0, 1, 3, 6, 9, 13, 17, 23, 29, 36, 43, 50, 58, 68, 79, 90};
    for (int m = 3; m <= 16; ++m) CHECK(make_mra(m).max_position() == optimal[m]);
    CHECK_THROWS(make_mra(2));
    CHECK_THROWS(make_mra(17));
}

TEST_CASE("mra_search agrees with brute force") {
    const auto four = mra_search(4, 10);
    CHECK(std::any_of(four.begin(), four.end(), [](const auto &l) { return pos(l) == V{0, 1, 4, 6}; }));
    const auto three = mra_search(3, 3);
    REQUIRE(three.size() == 1);
    CHECK(pos(three[0]) == V{0, 1, 3});
    CHECK(pos(mra_search(2, 5).at(0)) == V{0, 1});
    for (int m = 3; m <= 7; ++m) {
        const auto found = mra_search(m, 30);
        REQUIRE(!found.empty());
        const int best = oracle::best_ruler_extent(m, 30);
        for (const auto &l : found) CHECK(max_contiguous(difference_coarray(l)) == best);
        CHECK(std::find(found.begin(), found.end(), make_mra(m)) != found.end());
    }
}

TEST_CASE("enhanced MRA tiling") {
    CHECK(pos(make_emra(2, 3)) == V{0, 1, 3, 4, 5, 7});
    CHECK(make_emra(1, 6) == make_mra(6));
    const auto big = make_emra(8, 16);
    CHECK(big.size() == 128);
    check_invariants(big);
    CHECK(on_integer_grid(big));
}

TEST_CASE("aperture conventions") {
    const double lambda = wavelength_for(28e9);
    CHECK(lambda == doctest::Approx(0.010707).epsilon(1e-4));
    CHECK(aperture(make_compact(128), ApertureConvention::count, lambda) == doctest::Approx(0.6853).epsilon(1e-4));
    CHECK(aperture(make_compact(2), ApertureConvention::span, 2.0) == doctest::Approx(1.0));
    CHECK(aperture(make_usa(32, 4.1), ApertureConvention::span, lambda) ==
          doctest::Approx(127.1 * lambda / 2).epsilon(1e-12));
}

TEST_CASE("integer grid and uniformity") {
    CHECK(on_integer_grid(make_nested(3, 3)));
    CHECK_FALSE(on_integer_grid(make_usa(32, 4.1)));
    CHECK(on_integer_grid(make_usa(4, 2.0 + 1e-12)));
    CHECK(is_uniform(make_usa(8, 4.1)));
    CHECK(is_uniform(make_compact(5)));
    CHECK_FALSE(is_uniform(make_nested(3, 3)));
}

TEST_CASE("every generator yields a valid layout") {
    for (const auto &l : {make_compact(2), make_usa(9, 3.3), make_moa(3, 2, 5.5), make_nested(4, 7), make_coprime(5, 7),
                          make_mra(11), make_emra(3, 5)})
        check_invariants(l);
}

TEST_CASE("layout spec parsing") {
    CHECK(make_layout("ca(m=16)") == make_compact(16));
    CHECK(make_layout("usa(m=16,eta=4)") == make_usa(16, 4));
    CHECK(make_layout("na(min=3,mou=3)") == make_nested(3, 3));
    CHECK(make_layout("cpa(mf=4,ms=3)") == make_coprime(4, 3));
    CHECK(make_layout("moa(n=4,m=4,gamma=8)") == make_moa(4, 4, 8));
    CHECK(make_layout("emra(n=2,m=3)") == make_emra(2, 3));
    CHECK(make_layout("custom(0;2;3)") == make_custom({0, 2, 3}));
    CHECK_THROWS(make_layout("bogus(m=3)"));
    CHECK_THROWS(make_custom({0, 2, 2}));
    CHECK_THROWS(make_custom({1, 2}));
}

TEST_CASE("layout round trip through text") {
    const auto na = make_nested(3, 4);
    std::stringstream ss;
    write_layout(ss, na);
    CHECK(read_layout(ss) == na);
}

} // TEST_SUITE
