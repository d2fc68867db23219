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

#include "sparsemimo/geometry.hpp"
#include "sparsemimo/format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sparsemimo {

namespace {

std::string param_label(std::string_view name,
                        std::initializer_list<std::pair<const char *, double>> params) {
    std::string out(name);
    out += '(';
    bool first = true;
    for (const auto &[key, value] : params) {
        if (!first) out += ',';
        first = false;
        out += key;
        out += '=';
        out += format_number(value);
    }
    out += ')';
    return out;
}

std::string custom_label(const std::vector<double> &positions) {
    std::string label = "custom(";
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i) label += ';';
        label += format_number(positions[i]);
    }
    label += ')';
    return label;
}

void require(bool cond, const std::string &msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Gap sequences of the classical minimum-redundancy rulers for 3..16
// elements. Entries up to 8 elements are members of the exhaustive search
// result; 9..16 are sparse rulers of the known optimal length (14..16 are
// Wichmann rulers).
// Every entry is checked for a hole-free co-array when first used.
const std::map<int, std::vector<int>> &mra_gap_table() {
    static const std::map<int, std::vector<int>> table = {
        {3, {1, 2}},
        {4, {1, 3, 2}},
        {5, {1, 3, 3, 2}},
        {6, {1, 5, 3, 2, 2}},
        {7, {1, 3, 6, 2, 3, 2}},
        {8, {1, 3, 6, 6, 2, 3, 2}},
        {9, {1, 1, 12, 4, 3, 3, 3, 2}},
        {10, {1, 2, 3, 7, 7, 7, 4, 4, 1}},
        {11, {1, 2, 3, 7, 7, 7, 7, 4, 4, 1}},
        {12, {1, 1, 1, 20, 5, 4, 4, 4, 4, 3, 3}},
        {13, {1, 1, 1, 24, 5, 4, 4, 4, 4, 4, 3, 3}},
        {14, {1, 1, 3, 5, 5, 11, 11, 11, 6, 6, 6, 1, 1}},
        {15, {1, 1, 3, 5, 5, 11, 11, 11, 11, 6, 6, 6, 1, 1}},
        {16, {1, 1, 3, 5, 5, 11, 11, 11, 11, 11, 6, 6, 6, 1, 1}},
    };
    return table;
}

// Largest L such that every lag 1..L is a pairwise difference.
int contiguous_extent(const std::vector<int> &pos) {
    const int span = pos.back() - pos.front();
    std::vector<char> seen(static_cast<std::size_t>(span) + 1, 0);
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j) seen[static_cast<std::size_t>(pos[j] - pos[i])] = 1;
    int l = 0;
    while (l + 1 <= span && seen[static_cast<std::size_t>(l + 1)]) ++l;
    return l;
}

// Enumerates every ruler 0 < p_1 < ... < p_{m-2} < length whose difference
// set covers 1..length.
class RulerSearch {
  public:
    RulerSearch(int m, int length) : m_(m), length_(length) {}

    std::vector<std::vector<int>> run() {
        marks_ = {0, length_};
        covered_.assign(static_cast<std::size_t>(length_) + 1, 0);
        covered_[0] = 1;
        covered_[static_cast<std::size_t>(length_)] = 1;
        missing_ = length_ - 1;
        descend(0);
        return found_;
    }

  private:
    void descend(int last) {
        const int placed = static_cast<int>(marks_.size());
        const int remaining = m_ - placed;
        if (remaining == 0) {
            if (missing_ == 0) {
                auto sorted = marks_;
                std::sort(sorted.begin(), sorted.end());
                found_.push_back(std::move(sorted));
            }
            return;
        }
        // A new mark adds at most one new lag per existing mark.
        long capacity = 0;
        for (int i = 0; i < remaining; ++i) capacity += placed + i;
        if (missing_ > capacity) return;

        for (int p = last + 1; p <= length_ - remaining; ++p) {
            std::vector<int> added;
            for (int q : marks_) {
                const auto d = static_cast<std::size_t>(std::abs(p - q));
                if (!covered_[d]) {
                    covered_[d] = 1;
                    added.push_back(static_cast<int>(d));
                }
            }
            missing_ -= static_cast<int>(added.size());
            marks_.push_back(p);
            descend(p);
            marks_.pop_back();
            missing_ += static_cast<int>(added.size());
            for (int d : added) covered_[static_cast<std::size_t>(d)] = 0;
        }
    }

    int m_;
    int length_;
    int missing_ = 0;
    std::vector<int> marks_;
    std::vector<char> covered_;
    std::vector<std::vector<int>> found_;
};

ElementLayout layout_from_ints(const std::vector<int> &pos, Architecture arch, std::string label) {
    return ElementLayout(std::vector<double>(pos.begin(), pos.end()), arch, std::move(label));
}

std::vector<int> mra_positions(int m) {
    const auto &gaps = mra_gap_table().at(m);
    std::vector<int> pos{0};
    for (int g : gaps) pos.push_back(pos.back() + g);
    return pos;
}

} // namespace

double wavelength_for(double carrier_hz) {
    require(carrier_hz > 0.0 && std::isfinite(carrier_hz), "carrier frequency must be positive");
    return speed_of_light / carrier_hz;
}

std::string_view architecture_name(Architecture arch) {
    switch (arch) {
    case Architecture::compact: return "ca";
    case Architecture::usa: return "usa";
    case Architecture::moa: return "moa";
    case Architecture::nested: return "na";
    case Architecture::coprime: return "cpa";
    case Architecture::mra: return "mra";
    case Architecture::emra: return "emra";
    case Architecture::custom: return "custom";
    }
    return "custom";
}

ElementLayout::ElementLayout(std::vector<double> positions, Architecture arch, std::string label)
    : positions_(std::move(positions)), arch_(arch), label_(std::move(label)) {
    require(positions_.size() >= 2, "layout needs at least 2 elements");
    require(positions_.front() == 0.0, "layout must start at the origin");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        require(std::isfinite(positions_[i]), "layout positions must be finite");
        if (i > 0) require(positions_[i] > positions_[i - 1], "layout positions must be strictly increasing");
    }
}

std::vector<double> ElementLayout::positions_m(double wavelength) const {
    std::vector<double> out(positions_.size());
    std::transform(positions_.begin(), positions_.end(), out.begin(),
                   [&](double p) { return p * wavelength / 2.0; });
    return out;
}

ElementLayout make_compact(int m) {
    require(m >= 2, "compact array needs M >= 2");
    std::vector<double> pos(static_cast<std::size_t>(m));
    std::iota(pos.begin(), pos.end(), 0.0);
    return ElementLayout(std::move(pos), Architecture::compact, param_label("ca", {{"m", m}}));
}

ElementLayout make_usa(int m, double eta) {
    require(m >= 2, "USA needs M >= 2");
    require(std::isfinite(eta) && eta >= 1.0, "USA sparsity eta must be >= 1");
    std::vector<double> pos(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(i)] = i * eta;
    return ElementLayout(std::move(pos), Architecture::usa, param_label("usa", {{"m", m}, {"eta", eta}}));
}

ElementLayout make_moa(int n_modules, int module_size, double module_spacing) {
    require(n_modules >= 1 && module_size >= 1, "MoA needs at least one module of one element");
    require(n_modules * module_size >= 2, "MoA needs at least 2 elements");
    require(std::isfinite(module_spacing) && module_spacing >= module_size,
            "MoA module spacing Gamma must be >= module size");
    std::vector<double> pos;
    pos.reserve(static_cast<std::size_t>(n_modules * module_size));
    for (int n = 0; n < n_modules; ++n)
        for (int k = 0; k < module_size; ++k) pos.push_back(n * module_spacing + k);
    return ElementLayout(std::move(pos), Architecture::moa,
                         param_label("moa", {{"n", n_modules}, {"m", module_size}, {"gamma", module_spacing}}));
}

ElementLayout make_nested(int m_inner, int m_outer) {
    require(m_inner >= 1 && m_outer >= 1, "nested array needs M_in, M_ou >= 1");
    std::vector<int> pos;
    for (int i = 0; i < m_inner; ++i) pos.push_back(i);
    for (int k = 1; k <= m_outer; ++k) pos.push_back(k * (m_inner + 1) - 1);
    return layout_from_ints(pos, Architecture::nested, param_label("na", {{"min", m_inner}, {"mou", m_outer}}));
}

ElementLayout make_coprime(int m_first, int m_second) {
    require(m_first >= 2 && m_second >= 2, "coprime array needs M_f, M_s >= 2");
    require(std::gcd(m_first, m_second) == 1, "coprime array needs gcd(M_f, M_s) = 1");
    std::vector<int> pos;
    for (int k = 0; k < m_first; ++k) pos.push_back(k * m_second);
    for (int k = 1; k < m_second; ++k) pos.push_back(k * m_first);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    return layout_from_ints(pos, Architecture::coprime, param_label("cpa", {{"mf", m_first}, {"ms", m_second}}));
}

ElementLayout make_mra(int m) {
    require(m >= 3 && m <= 16, "MRA supported for 3 <= M <= 16");
    static const auto verified = [] {
        for (const auto &[count, gaps] : mra_gap_table()) {
            auto pos = mra_positions(count);
            if (contiguous_extent(pos) != pos.back())
                throw std::logic_error("MRA table entry is not hole-free");
        }
        return true;
    }();
    (void)verified;
    return layout_from_ints(mra_positions(m), Architecture::mra, param_label("mra", {{"m", m}}));
}

std::vector<ElementLayout> mra_search(int m, int max_aperture) {
    require(m >= 2, "MRA search needs M >= 2");
    require(m <= 8, "MRA search is limited to M <= 8");
    require(max_aperture >= 1, "max aperture must be positive");
    const int upper = std::min(max_aperture, m * (m - 1) / 2);
    for (int length = upper; length >= m - 1; --length) {
        auto rulers = RulerSearch(m, length).run();
        if (rulers.empty()) continue;
        std::vector<ElementLayout> out;
        for (auto &r : rulers) {
            std::vector<int> mirrored(r.size());
            std::transform(r.rbegin(), r.rend(), mirrored.begin(), [&](int p) { return length - p; });
            // keep the representative with the lexicographically smaller gap sequence
            if (mirrored < r) continue;
            std::vector<double> pos(r.begin(), r.end());
            out.emplace_back(pos, Architecture::mra, custom_label(pos));
        }
        return out;
    }
    return {};
}

ElementLayout make_emra(int n_sub, int sub_m) {
    require(n_sub >= 1, "EMRA needs at least one sub-array");
    const auto sub = make_mra(sub_m);
    const double pitch = sub.max_position() + 1.0;
    std::vector<double> pos;
    pos.reserve(static_cast<std::size_t>(n_sub) * sub.size());
    for (int k = 0; k < n_sub; ++k)
        for (double p : sub.positions()) pos.push_back(k * pitch + p);
    return ElementLayout(std::move(pos), Architecture::emra, param_label("emra", {{"n", n_sub}, {"m", sub_m}}));
}

ElementLayout make_custom(std::vector<double> positions) {
    auto label = custom_label(positions);
    return ElementLayout(std::move(positions), Architecture::custom, std::move(label));
}

ElementLayout leading_subarray(const ElementLayout &layout, std::size_t count) {
    require(count >= 2 && count <= layout.size(), "sub-array length must be in [2, M]");
    if (count == layout.size()) return layout;
    std::vector<double> pos(layout.positions().begin(), layout.positions().begin() + static_cast<long>(count));
    return make_custom(std::move(pos));
}

ElementLayout make_layout(std::string_view spec) {
    spec = trim(spec);
    const auto open = spec.find('(');
    const auto close = spec.rfind(')');
    require(open != std::string_view::npos && close == spec.size() - 1 && close > open,
            "layout spec must look like name(key=value,...): '" + std::string(spec) + "'");
    const std::string name(trim(spec.substr(0, open)));
    const auto body = spec.substr(open + 1, close - open - 1);

    if (name == "custom") {
        std::vector<double> pos;
        for (const auto &tok : split(body, ';')) pos.push_back(parse_double(tok));
        return make_custom(std::move(pos));
    }

    std::map<std::string, double> params;
    if (!trim(body).empty()) {
        for (const auto &tok : split(body, ',')) {
            const auto eq = tok.find('=');
            require(eq != std::string::npos, "layout parameter must be key=value: '" + tok + "'");
            params[std::string(trim(std::string_view(tok).substr(0, eq)))] =
                parse_double(std::string_view(tok).substr(eq + 1));
        }
    }
    auto take = [&](const char *key) {
        auto it = params.find(key);
        require(it != params.end(), "layout '" + name + "' is missing parameter '" + key + "'");
        const double v = it->second;
        params.erase(it);
        return v;
    };
    auto take_int = [&](const char *key) {
        const double v = take(key);
        require(v == std::floor(v) && std::abs(v) < 1e9,
                "layout parameter '" + std::string(key) + "' must be an integer");
        return static_cast<int>(v);
    };

    auto build = [&]() -> ElementLayout {
        if (name == "ca") return make_compact(take_int("m"));
        if (name == "usa") {
            const int m = take_int("m");
            return make_usa(m, take("eta"));
        }
        if (name == "moa") {
            const int n = take_int("n");
            const int m = take_int("m");
            return make_moa(n, m, take("gamma"));
        }
        if (name == "na") {
            const int mi = take_int("min");
            return make_nested(mi, take_int("mou"));
        }
        if (name == "cpa") {
            const int mf = take_int("mf");
            return make_coprime(mf, take_int("ms"));
        }
        if (name == "mra") return make_mra(take_int("m"));
        if (name == "emra") {
            const int n = take_int("n");
            return make_emra(n, take_int("m"));
        }
        throw std::invalid_argument("unknown architecture '" + name + "'");
    };
    auto layout = build();
    require(params.empty(), "layout '" + name + "' got unknown parameter '" +
                                (params.empty() ? std::string() : params.begin()->first) + "'");
    return layout;
}

double aperture(const ElementLayout &layout, ApertureConvention conv, double wavelength) {
    const double span = layout.max_position() - layout[0];
    const double d0 = wavelength / 2.0;
    if (conv == ApertureConvention::span) return span * d0;
    const double mean_gap = span / static_cast<double>(layout.size() - 1);
    return static_cast<double>(layout.size()) * mean_gap * d0;
}

bool on_integer_grid(const ElementLayout &layout, double tol) {
    require(tol > 0.0, "tolerance must be positive");
    return std::all_of(layout.positions().begin(), layout.positions().end(),
                       [&](double p) { return std::abs(p - std::round(p)) <= tol; });
}

std::vector<int> integer_positions(const ElementLayout &layout, double tol) {
    if (!on_integer_grid(layout, tol))
        throw std::invalid_argument("layout " + layout.label() + " is not on the integer grid");
    std::vector<int> out(layout.size());
    std::transform(layout.positions().begin(), layout.positions().end(), out.begin(),
                   [](double p) { return static_cast<int>(std::lround(p)); });
    return out;
}

bool is_uniform(const ElementLayout &layout, double tol) {
    const double gap = layout[1] - layout[0];
    for (std::size_t i = 2; i < layout.size(); ++i)
        if (std::abs((layout[i] - layout[i - 1]) - gap) > tol * std::max(1.0, gap)) return false;
    return true;
}

void write_layout(std::ostream &os, const ElementLayout &layout) {
    os << "# " << layout.label() << '\n';
    for (double p : layout.positions()) os << format_number(p) << '\n';
}

ElementLayout read_layout(std::istream &is) {
    std::string line;
    std::string label;
    std::vector<double> pos;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (label.empty() && pos.empty()) label = std::string(trim(t.substr(1)));
            continue;
        }
        try {
            pos.push_back(parse_double(t));
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("layout line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!label.empty()) {
        try {
            auto rebuilt = make_layout(label);
            if (std::equal(rebuilt.positions().begin(), rebuilt.positions().end(), pos.begin(), pos.end()))
                return rebuilt;
        } catch (const std::invalid_argument &) {
        }
    }
    return make_custom(std::move(pos));
}

} // namespace sparsemimo
