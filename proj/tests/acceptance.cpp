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

// Acceptance checks, one line per criterion. `acceptance` runs all of them;
// `acceptance --criterion N` runs one. Exit status is nonzero if any fails.

#include "cli.hpp"

#include <sparsemimo/coarray.hpp>
#include <sparsemimo/estimation.hpp>
#include <sparsemimo/format.hpp>
#include <sparsemimo/geometry.hpp>
#include <sparsemimo/parallel.hpp>
#include <sparsemimo/patterns.hpp>
#include <sparsemimo/random.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace fs = std::filesystem;
using namespace sparsemimo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
    bool pass = false;
    std::string detail;
};

int g_jobs = 1;

std::string num(double v) { return format_number(v); }

fs::path scratch(const std::string &tag) {
    auto p = fs::temp_directory_path() / ("sparsemimo_acceptance_" + tag);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Runs the CLI in-process; throws with its stderr on failure.
void cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0) throw std::runtime_error("CLI failed: " + err.str());
}

/// CSV rows as field vectors; double quotes protect commas.
std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(slurp(p));
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        std::vector<std::string> fields(1);
        bool quoted = false;
        for (char c : line) {
            if (c == '"')
                quoted = !quoted;
            else if (c == ',' && !quoted)
                fields.emplace_back();
            else
                fields.back() += c;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

/// Result CSV keyed by (metric, sweep value, architecture) -> (mean, stderr).
struct ResultTable {
    std::map<std::tuple<std::string, double, std::string>, std::pair<double, double>> cells;
    std::vector<std::string> architectures;

    explicit ResultTable(const fs::path &p) {
        for (const auto &r : read_csv(p)) {
            cells[{r[3], parse_double(r[1]), r[2]}] = {parse_double(r[4]), parse_double(r[5])};
            if (std::find(architectures.begin(), architectures.end(), r[2]) == architectures.end())
                architectures.push_back(r[2]);
        }
    }
    std::pair<double, double> at(const std::string &metric, double x, const std::string &arch) const {
        return cells.at({metric, x, arch});
    }
};

std::string manifest_value(const fs::path &manifest, const std::string &key) {
    std::istringstream is(slurp(manifest));
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    throw std::runtime_error("manifest has no key " + key);
}

// 1 ------------------------------------------------------------------------
Verdict pattern_oracle() {
    const auto grid = linspace(-2.0, 2.0, 4096);
    double worst = 0.0;
    for (int m : {2, 4, 8, 16, 64, 128}) {
        const auto curve = farfield_pattern(make_compact(m), grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(curve.gain[i] - closed_form_compact_pattern(m, grid[i])));
    }
    return {worst < 1e-12, "max |far-field - closed form| = " + num(worst) + " (< 1e-12)"};
}

// 2 ------------------------------------------------------------------------
Verdict resolution() {
    const double step = 1e-4;
    const auto grid = linspace(-1.0, 1.0, 20001);
    struct Case {
        const char *name;
        ElementLayout layout;
        double expect;
    };
    const Case cases[] = {{"CA(16)", make_compact(16), 0.125},
                          {"USA(16,4)", make_usa(16, 4.0), 0.03125},
                          {"MoA(4,4,8)", make_moa(4, 4, 8.0), 0.0625}};
    bool ok = true;
    std::string detail;
    for (const auto &c : cases) {
        const double got = angular_resolution(farfield_pattern(c.layout, grid));
        ok = ok && std::abs(got - c.expect) <= step + 1e-12;
        detail += std::string(c.name) + " " + num(got) + " vs " + num(c.expect) + "; ";
    }
    return {ok, detail + "tolerance one step " + num(step)};
}

// 3 ------------------------------------------------------------------------
Verdict grating_lobes() {
    const auto usa = make_usa(16, 4.0);
    const std::vector<double> lobes{-1.0, -0.5, 0.5, 1.0};
    const auto at_lobes = farfield_pattern(usa, lobes);
    double dev = 0.0;
    for (double g : at_lobes.gain) dev = std::max(dev, std::abs(g - 1.0));
    bool ok = dev < 1e-9;
    std::string detail = "USA(16,4) max |gain-1| at lobes " + num(dev) + "; ";

    const auto grid = linspace(-1.0, 1.0, 200001);
    for (const auto &l : {make_mra(6), make_nested(3, 3), make_coprime(4, 3)}) {
        const auto curve = farfield_pattern(l, grid);
        const auto side = peak_sidelobe(curve, mainlobe_edge(curve));
        ok = ok && side.level < 0.95;
        detail += l.label() + " peak outside main lobe " + num(side.level) + "; ";
    }
    return {ok, detail + "limit 0.95"};
}

// 4 ------------------------------------------------------------------------
Verdict coarray_structure() {
    const auto mra = difference_coarray(make_mra(6));
    bool ok = holes(mra).empty() && max_contiguous(mra) == 13;
    int bad_na = 0;
    for (int a = 1; a <= 10; ++a)
        for (int b = 1; b <= 10; ++b) {
            if (a + b < 2) continue;
            const auto na = make_nested(a, b);
            // Brute-force enumeration of the difference set.
            std::vector<bool> seen(static_cast<std::size_t>(na.max_position()) + 2, false);
            for (double p : na.positions())
                for (double q : na.positions())
                    if (p >= q) seen[static_cast<std::size_t>(p - q)] = true;
            int extent = 0;
            while (seen[static_cast<std::size_t>(extent) + 1]) ++extent;
            const int closed = b * (a + 1) - 1;
            if (extent != closed || max_contiguous(difference_coarray(na)) != closed) ++bad_na;
        }
    const auto cpa_holes = holes(difference_coarray(make_coprime(4, 3)));
    const bool cpa_ok = std::find(cpa_holes.begin(), cpa_holes.end(), 7) != cpa_holes.end();
    const int dof = sensing_dof(make_nested(8, 8));
    ok = ok && bad_na == 0 && cpa_ok && dof == 71 && dof >= 64;
    return {ok, "MRA-6 extent " + std::to_string(max_contiguous(mra)) + " holes " + std::to_string(holes(mra).size()) +
                    "; NA closed-form mismatches " + std::to_string(bad_na) + "/100; CPA(4,3) hole at 7 " +
                    (cpa_ok ? "yes" : "no") + "; NA(8,8) DoF " + std::to_string(dof) + " (>= 64)"};
}

// 5 ------------------------------------------------------------------------
Verdict coarray_dof() {
    const auto na = make_nested(3, 3);
    const double lambda = wavelength_for(28e9);
    SourceScene scene;
    std::vector<double> truth;
    for (int i = 0; i < 8; ++i) {
        truth.push_back(-0.8 + 1.6 * (i + 0.5) / 8.0);
        scene.sources.push_back({std::asin(truth.back()), kInf, 1.0});
    }
    const auto grid = sin_grid(1e-3);
    std::vector<int> ok(100, 0);
    parallel_for(ok.size(), g_jobs, [&](std::size_t t) {
        const auto x = simulate_snapshots(na, lambda, scene, 2000, 0.1, derive_seed(5, {t}));
        try {
            const auto rep = coarray_music(sample_covariance(x), na, 8, grid);
            bool all = rep.angles.size() == 8;
            for (std::size_t i = 0; all && i < 8; ++i) all = std::abs(std::sin(rep.angles[i]) - truth[i]) < 0.01;
            ok[t] = all;
        } catch (const EstimationError &) {
        }
    });
    const int hits = std::accumulate(ok.begin(), ok.end(), 0);
    return {hits >= 90, "NA(3,3), 6 elements, 8 sources: all within 0.01 in " + std::to_string(hits) +
                            "/100 trials (need >= 90)"};
}

// 6 ------------------------------------------------------------------------
Verdict coherent() {
    const auto ca = make_compact(16);
    const double lambda = wavelength_for(28e9);
    const double u1 = -0.125, u2 = 0.125;
    SourceScene scene;
    scene.coherent = true;
    scene.sources = {{std::asin(u1), kInf, 1.0}, {std::asin(u2), kInf, 1.0}};
    const auto grid = sin_grid(1e-3);
    auto resolved = [&](const EstimateReport &rep) {
        return rep.angles.size() == 2 && std::abs(std::sin(rep.angles[0]) - u1) < 0.02 &&
               std::abs(std::sin(rep.angles[1]) - u2) < 0.02;
    };
    std::vector<int> plain(100, 0), smooth(100, 0);
    parallel_for(plain.size(), g_jobs, [&](std::size_t t) {
        const auto x = simulate_snapshots(ca, lambda, scene, 1000, 0.01, derive_seed(6, {t}));
        try {
            plain[t] = resolved(music_far(sample_covariance(x), ca, 2, grid));
        } catch (const EstimationError &) {
        }
        try {
            smooth[t] = resolved(music_far(spatial_smoothing(x, 8), make_compact(8), 2, grid));
        } catch (const EstimationError &) {
        }
    });
    const int plain_ok = std::accumulate(plain.begin(), plain.end(), 0);
    const int smooth_ok = std::accumulate(smooth.begin(), smooth.end(), 0);
    const int plain_fail = 100 - plain_ok;
    return {plain_fail >= 50 && smooth_ok >= 90,
            "plain MUSIC fails in " + std::to_string(plain_fail) + "/100 (need >= 50); smoothing succeeds in " +
                std::to_string(smooth_ok) + "/100 (need >= 90)"};
}

// 7 ------------------------------------------------------------------------
Verdict near_field() {
    const double lambda = wavelength_for(28e9);
    const FocusPoint focus{200.0, 0.0};
    auto ranges = std::vector<double>{};
    for (int i = 0; i < 200; ++i) ranges.push_back(50.0 * std::pow(200.0, i / 199.0));
    ranges.push_back(200.0);
    std::sort(ranges.begin(), ranges.end());
    std::vector<double> angles;
    for (int i = -180; i <= 180; ++i) angles.push_back(i * 0.5 * std::numbers::pi / 180.0);
    angles.front() = -89.9 * std::numbers::pi / 180.0;
    angles.back() = 89.9 * std::numbers::pi / 180.0;

    bool ok = true;
    std::string detail;
    for (const auto &l : {make_compact(128), make_usa(128, 4.1)}) {
        const auto grid = nearfield_focus_pattern(l, lambda, focus, ranges, angles);
        const auto best = static_cast<std::size_t>(std::max_element(grid.gain.begin(), grid.gain.end()) - grid.gain.begin());
        const double pr = grid.ranges[best / angles.size()];
        const double pa = grid.angles[best % angles.size()];
        const bool at_focus = pr == 200.0 && pa == 0.0;
        const auto depth = depth_3db(grid);
        const bool depth_ok = l.architecture() == Architecture::compact ? !depth.upper_bounded() : depth.upper_bounded();
        ok = ok && at_focus && depth_ok;
        detail += l.label() + " peak (" + num(pr) + " m, " + num(pa) + " rad) depth [" + num(depth.r_lo) + ", " +
                  num(depth.r_hi) + "]; ";
    }
    return {ok, detail + "compact unbounded above, USA finite"};
}

// 8 ------------------------------------------------------------------------
Verdict fig5() {
    const auto dir = scratch("fig5");
    cli({"--seed", "1", "--jobs", std::to_string(g_jobs), "--preset", "fig5", "isac", "--trials", "100", "--out",
         dir.string()});
    const ResultTable t(dir / "isac_sensing.csv");
    const double threshold = parse_double(manifest_value(dir / "manifest.txt", "nrmse_threshold"));
    auto find = [&](const std::string &prefix) {
        for (const auto &a : t.architectures)
            if (a.rfind(prefix, 0) == 0) return a;
        throw std::runtime_error("fig5 output lacks " + prefix);
    };
    const auto ca = find("ca("), usa = find("usa("), na = find("na("), cpa = find("cpa(");
    auto low = [&](const std::string &a) { return t.at("nrmse_doa", -10.0, a).first; };
    auto high = [&](const std::string &a) { return t.at("nrmse_doa", 10.0, a).first; };
    const bool order = std::max(low(na), low(cpa)) < std::min(low(usa), low(ca));
    bool good = true;
    for (const auto &a : {ca, usa, na, cpa}) good = good && high(a) < threshold;
    fs::remove_all(dir);
    return {order && good, "-10 dB NRMSE: NA " + num(low(na)) + ", CPA " + num(low(cpa)) + ", USA " + num(low(usa)) +
                               ", CA " + num(low(ca)) + "; +10 dB max " +
                               num(std::max({high(ca), high(usa), high(na), high(cpa)})) + " vs threshold " +
                               num(threshold)};
}

// 9 ------------------------------------------------------------------------
Verdict fig6() {
    const auto dir = scratch("fig6");
    cli({"--seed", "1", "--jobs", std::to_string(g_jobs), "--preset", "fig6", "isac", "--trials", "50", "--out",
         dir.string()});
    const ResultTable t(dir / "isac_rate.csv");
    const std::string nf = "sum_rate_near_field_mrc", ff = "sum_rate_far_field_mrc";
    std::string ca;
    for (const auto &a : t.architectures)
        if (a.rfind("ca(", 0) == 0) ca = a;
    if (ca.empty()) throw std::runtime_error("fig6 output lacks the compact layout");

    // Sparse layouts beat compact at 5 m with separated 2-stderr intervals.
    const auto [ca_mean, ca_se] = t.at(nf, 5.0, ca);
    double worst_gap = kInf;
    for (const auto &a : t.architectures) {
        if (a == ca) continue;
        const auto [m, se] = t.at(nf, 5.0, a);
        worst_gap = std::min(worst_gap, (m - 2 * se) - (ca_mean + 2 * ca_se));
    }
    const bool small_ok = worst_gap > 0.0;

    // Large radii, near-field MRC curves: relative spread (max - min) / min below 10%.
    std::set<double> radii;
    for (const auto &[key, v] : t.cells) radii.insert(std::get<1>(key));
    double worst_spread = 0.0;
    for (double r : radii) {
        if (r < 100.0) continue;
        double lo = kInf, hi = 0.0;
        for (const auto &a : t.architectures) {
            lo = std::min(lo, t.at(nf, r, a).first);
            hi = std::max(hi, t.at(nf, r, a).first);
        }
        worst_spread = std::max(worst_spread, (hi - lo) / lo);
    }
    const bool large_ok = worst_spread < 0.10;

    double worst_nf_ff = kInf;
    for (double r : radii)
        for (const auto &a : t.architectures) worst_nf_ff = std::min(worst_nf_ff, t.at(nf, r, a).first - t.at(ff, r, a).first);
    const bool model_ok = worst_nf_ff >= 0.0;
    fs::remove_all(dir);
    return {small_ok && large_ok && model_ok,
            "5 m: smallest sparse-minus-compact interval gap " + num(worst_gap) + " (> 0); radius >= 100 m spread " +
                num(100 * worst_spread) + "% (< 10%); min near-minus-far " + num(worst_nf_ff) + " (>= 0)"};
}

// 10 -----------------------------------------------------------------------
Verdict determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"pattern", "--layouts", "ca(m=8) na(min=2,mou=3)", "--grid-points", "301"},
        {"focus", "--arch", "usa", "--m", "32", "--eta", "4.1", "--range-points", "30", "--angle-points", "31"},
        {"coarray", "--arch", "cpa", "--mf", "5", "--ms", "4"},
        {"doa", "--est", "zf-music", "--arch", "na", "--min", "4", "--mou", "4", "--users", "3", "--trials", "8"},
        {"isac", "--layouts", "na(min=8,mou=8) ca(m=16)", "--k-users", "4", "--snr-db", "-5 5", "--trials", "6",
         "--disk-radius-m", "20"},
        {"isac", "--mode", "rate", "--arch", "usa", "--m", "16", "--eta", "4", "--k-users", "5", "--radii-m", "5 40",
         "--models", "near_field far_field", "--grouping", "best", "--trials", "6"},
    };
    const auto root = scratch("determinism");
    int identical = 0, total = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<std::map<std::string, std::string>> outputs;
        for (const char *jobs : {"1", "1", "3"}) {
            const auto dir = root / (std::to_string(c) + "_" + std::to_string(outputs.size()));
            std::vector<std::string> args{"--seed", "11", "--jobs", jobs};
            args.insert(args.end(), commands[c].begin(), commands[c].end());
            args.insert(args.end(), {"--out", dir.string()});
            cli(args);
            std::map<std::string, std::string> files;
            for (const auto &e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
            outputs.push_back(std::move(files));
        }
        total += 2;
        identical += (outputs[0] == outputs[1]) + (outputs[0] == outputs[2]);
    }
    fs::remove_all(root);
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " repeat and --jobs comparisons byte-identical across all subcommands"};
}

struct Criterion {
    int id;
    const char *title;
    double budget_s;
    std::function<Verdict()> check;
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"acceptance checks"};
    int only = 0;
    g_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
    app.add_option("--jobs", g_jobs, "worker threads for Monte Carlo criteria")->check(CLI::Range(1, 1024));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "pattern oracle", 1, pattern_oracle},
        {2, "resolution formulas", 1, resolution},
        {3, "grating lobes", 1, grating_lobes},
        {4, "co-array structure", 1, coarray_structure},
        {5, "DoF beyond physical elements", 60, coarray_dof},
        {6, "coherent decorrelation", 60, coherent},
        {7, "near-field focusing", 30, near_field},
        {8, "sensing NRMSE trends", 600, fig5},
        {9, "sum-rate trends", 600, fig6},
        {10, "determinism", 60, determinism},
    };
    int failed = 0;
    for (const auto &c : all) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception &e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = v.pass && in_time;
        failed += !pass;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.budget_s);
        std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " [" << c.title << "] " << v.detail
                  << " (" << timing << (in_time ? "" : ", over budget") << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
