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

#include "commands.hpp"

#include "sparsemimo/coarray.hpp"
#include "sparsemimo/estimation.hpp"
#include "sparsemimo/format.hpp"
#include "sparsemimo/geometry.hpp"
#include "sparsemimo/isacsim.hpp"
#include "sparsemimo/parallel.hpp"
#include "sparsemimo/patterns.hpp"
#include "sparsemimo/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace sparsemimo::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deg(double d) { return d * std::numbers::pi / 180.0; }

/// "usa(m=16,eta=4.1)" -> "usa_m_16_eta_4_1"
std::string slug(std::string_view label) {
    std::string out;
    for (char c : label) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
        if (keep)
            out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "layout" : out;
}

/// prefix_<slug>.csv, with _2, _3 ... appended to repeated layouts.
std::vector<std::string> file_names(std::string_view prefix, const std::vector<ElementLayout> &layouts) {
    std::vector<std::string> out;
    std::set<std::string> used;
    for (const auto &l : layouts) {
        const std::string base = std::string(prefix) + "_" + slug(l.label());
        std::string name = base;
        for (int i = 2; used.contains(name); ++i) name = base + "_" + std::to_string(i);
        used.insert(name);
        out.push_back(name + ".csv");
    }
    return out;
}

std::vector<ElementLayout> layouts_of(const Settings &s, std::string_view cmd) {
    const auto specs = s.words("layouts");
    if (specs.empty())
        throw UsageError(std::string(cmd) + " needs --arch (with its size flags), --layouts or --preset");
    std::vector<ElementLayout> out;
    for (const auto &spec : specs) {
        try {
            out.push_back(make_layout(spec));
        } catch (const std::invalid_argument &e) {
            s.fail("layouts", e.what());
        }
    }
    return out;
}

std::vector<double> geometric(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

/// Sorted copy of `grid` that contains `value` exactly.
std::vector<double> with_point(std::vector<double> grid, double value) {
    const bool present = std::any_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - value) <= 1e-12; });
    if (!present) {
        grid.push_back(value);
        std::sort(grid.begin(), grid.end());
    } else {
        for (double &g : grid)
            if (std::abs(g - value) <= 1e-12) g = value;
    }
    return grid;
}

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------- pattern

CommandResult cmd_pattern(const Settings &s) {
    const auto layouts = layouts_of(s, "pattern");
    const double lo = s.real_in("grid_min", -2.0, 2.0);
    const double hi = s.real_in("grid_max", -2.0, 2.0);
    if (!(hi > lo)) s.fail("grid_max", "must exceed grid_min");
    const auto points = static_cast<std::size_t>(s.integer("grid_points", 3, 10'000'000));
    const bool db = s.flag("db");
    const auto grid = linspace(lo, hi, points);
    const auto names = file_names("pattern", layouts);

    CommandResult res;
    std::ostringstream sum;
    sum << "architecture,elements,first_null,peak_sidelobe_db\n";
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        const auto curve = farfield_pattern(layouts[i], grid);
        std::ostringstream csv;
        write_pattern_csv(csv, curve, db);
        res.files.push_back({names[i], csv.str()});

        sum << '"' << layouts[i].label() << "\"," << layouts[i].size() << ',';
        // Sparse layouts may lack a deep null; the side-lobe peak then uses the main-lobe edge.
        try {
            sum << fmt(angular_resolution(curve));
        } catch (const std::exception &) {
        }
        sum << ',';
        try {
            sum << fmt(gain_db(peak_sidelobe(curve, mainlobe_edge(curve)).level));
        } catch (const std::exception &) {
        }
        sum << '\n';
    }
    res.summary = sum.str();
    return res;
}

// ---------------------------------------------------------------- focus

CommandResult cmd_focus(const Settings &s) {
    const auto layouts = layouts_of(s, "focus");
    const double carrier = s.real_in("carrier_hz", 1.0, 1e15);
    const double wavelength = wavelength_for(carrier);
    const FocusPoint focus{s.real_in("focus_range_m", 1e-9, 1e12), deg(s.real_in("focus_angle_deg", -89.999, 89.999))};
    const double r_lo = s.real_in("range_min_m", 1e-9, 1e12);
    const double r_hi = s.real_in("range_max_m", 1e-9, 1e12);
    if (!(r_hi > r_lo)) s.fail("range_max_m", "must exceed range_min_m");
    const auto n_r = static_cast<std::size_t>(s.integer("range_points", 2, 100'000));
    const double a_lo = s.real_in("angle_min_deg", -89.999, 89.999);
    const double a_hi = s.real_in("angle_max_deg", -89.999, 89.999);
    if (!(a_hi > a_lo)) s.fail("angle_max_deg", "must exceed angle_min_deg");
    const auto n_a = static_cast<std::size_t>(s.integer("angle_points", 2, 100'000));
    const bool db = s.flag("db");

    const auto ranges = with_point(geometric(r_lo, r_hi, n_r), focus.range);
    auto angles = linspace(deg(a_lo), deg(a_hi), n_a);
    angles = with_point(std::move(angles), focus.angle);
    for (const auto &l : layouts) {
        const double span = l.positions().back() * wavelength / 2.0;
        if (!(ranges.front() > span))
            s.fail("range_min_m", "must exceed the aperture of " + l.label() + " (" + fmt(span) + " m)");
    }
    const auto names = file_names("focus", layouts);

    CommandResult res;
    std::ostringstream sum;
    sum << "architecture,peak_range_m,peak_angle_rad,depth_lo_m,depth_hi_m\n";
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        const auto grid = nearfield_focus_pattern(layouts[i], wavelength, focus, ranges, angles);
        std::ostringstream csv;
        write_focus_csv(csv, grid, db);
        res.files.push_back({names[i], csv.str()});

        const auto peak = std::max_element(grid.gain.begin(), grid.gain.end()) - grid.gain.begin();
        const auto pr = static_cast<std::size_t>(peak) / grid.angles.size();
        const auto pa = static_cast<std::size_t>(peak) % grid.angles.size();
        const auto depth = depth_3db(grid);
        sum << '"' << layouts[i].label() << "\"," << fmt(grid.ranges[pr]) << ',' << fmt(grid.angles[pa]) << ','
            << fmt(depth.r_lo) << ',' << fmt(depth.r_hi) << '\n';
    }
    res.summary = sum.str();
    return res;
}

// ---------------------------------------------------------------- coarray

std::string join_ints(const std::vector<int> &v) {
    if (v.empty()) return "none";
    std::string out;
    for (int x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
    return out;
}

CommandResult cmd_coarray(const Settings &s) {
    const auto layouts = layouts_of(s, "coarray");
    const bool sum_kind = s.choice("kind", {"difference", "sum"}) == "sum";
    for (const auto &l : layouts)
        if (!on_integer_grid(l))
            s.fail("layouts", "layout " + l.label() +
                                  " is not on the integer grid; co-arrays need integer element positions in units "
                                  "of d0 (a USA with eta = 4.1 has non-integer spacing 4.1 d0)");
    const auto names = file_names("coarray", layouts);

    CommandResult res;
    std::ostringstream report;
    for (std::size_t i = 0; i < layouts.size(); ++i) {
        const auto profile = sum_kind ? sum_coarray(layouts[i]) : difference_coarray(layouts[i]);
        std::ostringstream csv;
        write_profile_csv(csv, profile);
        res.files.push_back({names[i], csv.str()});
        report << "layout " << layouts[i].label() << '\n'
               << "  kind " << (sum_kind ? "sum" : "difference") << '\n'
               << "  elements " << layouts[i].size() << '\n'
               << "  max_contiguous " << max_contiguous(profile) << '\n'
               << "  holes " << join_ints(holes(profile)) << '\n'
               << "  sensing_dof " << sensing_dof(layouts[i]) << '\n';
    }
    res.files.push_back({"coarray_report.txt", report.str()});
    res.summary = report.str();
    return res;
}

// ---------------------------------------------------------------- doa

struct TrialOutcome {
    std::optional<EstimateReport> report;
    std::string failure;
};

CommandResult cmd_doa(const Settings &s, int jobs) {
    const auto layouts = layouts_of(s, "doa");
    if (layouts.size() != 1) s.fail("layouts", "doa takes exactly one layout");
    const auto &layout = layouts.front();
    const auto m = static_cast<int>(layout.size());
    const std::string est =
        s.choice("est", {"music", "smooth-music", "coarray-music", "two-stage", "omp", "zf-music"});
    const int k = static_cast<int>(s.integer("k", 0, 10'000));
    const int trials = static_cast<int>(s.integer("trials", 1, 10'000'000));
    const int snapshots = static_cast<int>(s.integer("snapshots", 1, 100'000'000));
    const double noise = std::pow(10.0, -s.real_in("snr_db", -300.0, 300.0) / 10.0);
    const double wavelength = wavelength_for(s.real_in("carrier_hz", 1.0, 1e15));
    const double step = s.real_in("grid_step", 1e-7, 0.49);
    const bool coherent = s.flag("coherent");
    const auto seed = s.u64("seed");

    std::vector<double> angles = s.reals("angles_deg");
    if (angles.empty()) {
        for (int i = 0; i < k; ++i) angles.push_back(std::asin(-0.8 + 1.6 * (i + 0.5) / k));
    } else {
        if (static_cast<int>(angles.size()) != k) s.fail("angles_deg", "needs exactly k = " + std::to_string(k) + " values");
        for (double &a : angles) {
            if (!(std::abs(a) < 90.0)) s.fail("angles_deg", "angles must lie in (-90, 90)");
            a = deg(a);
        }
    }
    std::vector<double> ranges = s.reals("ranges_m");
    if (ranges.empty()) ranges.assign(static_cast<std::size_t>(k), kInf);
    if (static_cast<int>(ranges.size()) != k) s.fail("ranges_m", "needs exactly k = " + std::to_string(k) + " values");
    for (double r : ranges)
        if (!(r > 0.0)) s.fail("ranges_m", "ranges must be positive or inf");
    std::vector<double> powers = s.reals("powers");
    if (powers.empty()) powers.assign(static_cast<std::size_t>(k), 1.0);
    if (static_cast<int>(powers.size()) != k) s.fail("powers", "needs exactly k = " + std::to_string(k) + " values");
    for (double p : powers)
        if (!(p > 0.0)) s.fail("powers", "powers must be positive");

    SourceScene scene;
    scene.coherent = coherent;
    for (int i = 0; i < k; ++i) scene.sources.push_back({angles[i], ranges[i], powers[i]});
    std::sort(scene.sources.begin(), scene.sources.end(),
              [](const Source &a, const Source &b) { return a.angle < b.angle; });
    std::vector<double> truth;
    for (const auto &src : scene.sources) truth.push_back(src.angle);

    const double r_min = s.real_in("range_min_m", 1e-9, 1e12);
    const double r_max = s.real_in("range_max_m", 1e-9, 1e12);
    if (!(r_max > r_min)) s.fail("range_max_m", "must exceed range_min_m");
    const auto range_grid = geometric(r_min, r_max, static_cast<std::size_t>(s.integer("range_points", 1, 100'000)));
    const double reference_range = s.real("reference_range_m");
    if (!(reference_range > 0.0)) s.fail("reference_range_m", "must be positive or inf");

    int subarray = static_cast<int>(s.integer("subarray", 0, m));
    if (subarray == 0) subarray = std::max(2, m / 2);
    if (est == "smooth-music" && !is_uniform(layout))
        s.fail("layouts", "spatial smoothing requires a uniform layout (compact or USA); " + layout.label() +
                              " has unequal spacings");
    if (est == "coarray-music" && !on_integer_grid(layout))
        s.fail("layouts", "co-array MUSIC needs an integer-grid layout; " + layout.label() + " is off the grid");

    const int users = static_cast<int>(s.integer("users", 0, 100'000));
    const UserDisk disk{s.real_in("user_range_m", 1e-9, 1e12), deg(s.real_in("user_angle_deg", -89.999, 89.999)),
                        s.real_in("user_radius_m", 0.0, 1e12)};
    const double user_power = std::pow(10.0, s.real_in("user_power_db", -300.0, 300.0) / 10.0);
    const bool range_known = s.flag("range_known");
    if (est == "zf-music" && users > 0) {
        if (!(disk.radius < disk.center_range * std::cos(disk.center_angle)))
            s.fail("user_radius_m", "user disk must not reach the array plane");
    }
    if (est == "zf-music" && range_known && k != 1) s.fail("range_known", "needs exactly one target (k = 1)");

    const auto grid = sin_grid_for(layout, step);
    std::vector<double> omp_angles;
    if (est == "omp")
        for (double u : grid) omp_angles.push_back(std::asin(u));

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(outcomes.size(), jobs, [&](std::size_t t) {
        const auto trial_seed = derive_seed(seed, {t});
        try {
            EstimateReport rep;
            if (est == "zf-music") {
                const auto dropped = drop_users(derive_seed(seed, {t, 1}), disk, users);
                const CMatrix h = users > 0 ? user_channels(layout, wavelength, dropped, ChannelModel::near_field)
                                            : CMatrix(m, 0);
                CMatrix channels(m, users + k);
                channels.leftCols(users) = h;
                std::vector<double> pw(static_cast<std::size_t>(users), user_power);
                for (int i = 0; i < k; ++i) {
                    const auto &src = scene.sources[static_cast<std::size_t>(i)];
                    channels.col(users + i) = steer_near(layout, wavelength, src.range, src.angle);
                    pw.push_back(src.power);
                }
                const auto snap = simulate_snapshots_from_channels(layout, wavelength, channels, pw, coherent,
                                                                   snapshots, noise, trial_seed);
                std::vector<double> rg;
                if (range_known)
                    rg.push_back(scene.sources.front().range);
                else if (std::any_of(scene.sources.begin(), scene.sources.end(),
                                     [](const Source &x) { return std::isfinite(x.range); }))
                    rg = range_grid;
                rep = zf_music(snap, h, k, grid, rg);
            } else {
                const auto snap = simulate_snapshots(layout, wavelength, scene, snapshots, noise, trial_seed);
                if (est == "music")
                    rep = music_far(sample_covariance(snap), layout, k, grid);
                else if (est == "smooth-music") {
                    const auto sub = leading_subarray(layout, static_cast<std::size_t>(subarray));
                    rep = music_far(spatial_smoothing(snap, subarray), sub, k, sin_grid_for(sub, step));
                } else if (est == "coarray-music")
                    rep = coarray_music(sample_covariance(snap), layout, k, grid);
                else if (est == "two-stage")
                    rep = two_stage_near(snap, k, grid, range_grid, reference_range);
                else
                    rep = polar_omp(snap, k, omp_angles, range_grid);
            }
            outcomes[t].report = std::move(rep);
        } catch (const EstimationError &e) {
            outcomes[t].failure = e.what();
        }
    });

    CommandResult res;
    std::ostringstream rows;
    write_estimate_header(rows);
    std::vector<std::vector<double>> per_source(truth.size());
    int failures = 0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto &o = outcomes[t];
        if (!o.report) {
            ++failures;
            write_estimate_rows(rows, static_cast<int>(t), truth, EstimateReport{}, est);
            continue;
        }
        write_estimate_rows(rows, static_cast<int>(t), truth, *o.report, est);
        for (std::size_t i = 0; i < truth.size() && i < o.report->angles.size(); ++i)
            per_source[i].push_back(o.report->angles[i]);
    }
    res.files.push_back({"doa_estimates.csv", rows.str()});

    std::ostringstream summary;
    summary << "method,architecture,true_angle_rad,nrmse,failures,trials\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double value =
            per_source[i].empty() ? std::numeric_limits<double>::quiet_NaN() : nrmse(per_source[i], truth[i]);
        summary << est << ",\"" << layout.label() << "\"," << fmt(truth[i]) << ',' << fmt(value) << ',' << failures
                << ',' << trials << '\n';
    }
    res.files.push_back({"doa_summary.csv", summary.str()});

    if (s.flag("spectrum") && outcomes.front().report) {
        const auto &rep = *outcomes.front().report;
        std::ostringstream csv;
        csv << "grid,spectrum\n";
        for (std::size_t i = 0; i < rep.spectrum_grid.size() && i < rep.spectrum.size(); ++i)
            csv << fmt(rep.spectrum_grid[i]) << ',' << fmt(rep.spectrum[i]) << '\n';
        res.files.push_back({"doa_spectrum.csv", csv.str()});
    }
    res.summary = summary.str();
    if (failures > 0) res.summary += std::to_string(failures) + " of " + std::to_string(trials) + " trials failed\n";
    return res;
}

// ---------------------------------------------------------------- isac

CommandResult cmd_isac(const Settings &s, int jobs) {
    const std::string mode = s.choice("mode", {"sensing", "rate"});
    ScenarioConfig c;
    c.architectures = s.words("layouts");
    (void)layouts_of(s, "isac");
    c.carrier_hz = s.real_in("carrier_hz", 1.0, 1e15);
    c.k_users = static_cast<int>(s.integer("k_users", 1, 100'000));
    c.disk.center_range = s.real_in("disk_range_m", 1e-9, 1e12);
    c.disk.center_angle = deg(s.real_in("disk_angle_deg", -89.999, 89.999));
    c.disk.radius = s.real_in("disk_radius_m", 0.0, 1e12);
    c.radii = s.reals("radii_m");
    c.target_range = s.real_in("target_range_m", 1e-9, 1e12);
    c.target_angle = deg(s.real_in("target_angle_deg", -89.999, 89.999));
    c.snr_db = s.reals("snr_db");
    c.rate_snr_db = s.real_in("rate_snr_db", -300.0, 300.0);
    c.user_to_target_db = s.real_in("user_to_target_db", -300.0, 300.0);
    c.beamforming_models.clear();
    for (const auto &w : s.words("models")) {
        if (w == "near_field")
            c.beamforming_models.push_back(ChannelModel::near_field);
        else if (w == "far_field")
            c.beamforming_models.push_back(ChannelModel::far_field);
        else
            s.fail("models", "expected near_field or far_field, got '" + w + "'");
    }
    if (c.beamforming_models.empty()) s.fail("models", "needs at least one model");
    c.combiner = s.choice("combiner", {"mrc", "zf"}) == "zf" ? CombinerKind::zf : CombinerKind::mrc;
    const auto grouping = s.choice("grouping", {"none", "greedy", "best"});
    c.grouping = grouping == "none" ? GroupingMode::none : grouping == "best" ? GroupingMode::best : GroupingMode::greedy;
    c.grouping_threshold = s.real_in("grouping_threshold", 0.0, 1.0);
    c.snapshots = static_cast<int>(s.integer("snapshots", 1, 100'000'000));
    c.target_range_known = s.flag("target_range_known");
    c.grid_step = s.real_in("grid_step", 1e-7, 0.49);
    c.trials = static_cast<int>(s.integer("trials", 1, 10'000'000));
    c.master_seed = s.u64("seed");
    const double threshold = s.real("nrmse_threshold");

    auto disk_ok = [&](double radius) { return radius < c.disk.center_range * std::cos(c.disk.center_angle); };
    CommandResult res;
    std::ostringstream csv;
    if (mode == "sensing") {
        if (c.snr_db.empty()) s.fail("snr_db", "sweep is empty");
        if (!disk_ok(c.disk.radius)) s.fail("disk_radius_m", "user disk must not reach the array plane");
        for (const auto &spec : c.architectures)
            if (static_cast<int>(make_layout(spec).size()) <= c.k_users + 1)
                s.fail("k_users", "layout " + spec + " has too few elements to null " + std::to_string(c.k_users) +
                                      " users and keep a target subspace");
        const auto rows = run_sensing_experiment(c, jobs);
        write_result_csv(csv, rows);
        res.files.push_back({"isac_sensing.csv", csv.str()});

        std::ostringstream sum;
        const double top = *std::max_element(c.snr_db.begin(), c.snr_db.end());
        bool all_below = true;
        sum << "snr_db,architecture,nrmse_doa,failure_rate\n";
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
            sum << fmt(rows[i].sweep_value) << ",\"" << rows[i].architecture << "\"," << fmt(rows[i].mean) << ','
                << fmt(rows[i + 1].mean) << '\n';
            if (rows[i].sweep_value == top && !(rows[i].mean < threshold)) all_below = false;
        }
        sum << "all layouts below nrmse_threshold " << fmt(threshold) << " at " << fmt(top)
            << " dB: " << (all_below ? "yes" : "no") << '\n';
        res.summary = sum.str();
    } else {
        if (c.radii.empty()) s.fail("radii_m", "sweep is empty");
        for (double r : c.radii) {
            if (!(r >= 0.0)) s.fail("radii_m", "radii must be non-negative");
            if (!disk_ok(r)) s.fail("radii_m", "radius " + fmt(r) + " m reaches the array plane");
        }
        const auto rows = run_rate_experiment(c, jobs);
        write_result_csv(csv, rows);
        res.files.push_back({"isac_rate.csv", csv.str()});
        std::ostringstream sum;
        sum << "radius_m,architecture,metric,mean,stderr\n";
        for (const auto &r : rows)
            sum << fmt(r.sweep_value) << ",\"" << r.architecture << "\"," << r.metric << ',' << fmt(r.mean) << ','
                << fmt(r.std_error) << '\n';
        res.summary = sum.str();
    }
    return res;
}

} // namespace

CommandResult run_command(Command cmd, const Settings &settings, int jobs) {
    switch (cmd) {
    case Command::pattern: return cmd_pattern(settings);
    case Command::focus: return cmd_focus(settings);
    case Command::coarray: return cmd_coarray(settings);
    case Command::doa: return cmd_doa(settings, jobs);
    case Command::isac: return cmd_isac(settings, jobs);
    }
    return {};
}

} // namespace sparsemimo::cli
