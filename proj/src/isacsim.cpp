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

#include "sparsemimo/isacsim.hpp"
#include "sparsemimo/format.hpp"
#include "sparsemimo/parallel.hpp"
#include "sparsemimo/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sparsemimo {

namespace {

void require(bool cond, const std::string &msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double free_space_gain(double wavelength, double range) { return wavelength / (4.0 * std::numbers::pi * range); }

struct Stats {
    double mean = 0.0;
    double std_error = 0.0;
};

Stats summarize(std::span<const double> v) {
    Stats s;
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double acc = 0.0;
        for (double x : v) acc += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(acc / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return s;
}

std::string_view model_name(ChannelModel model) { return model == ChannelModel::near_field ? "near_field" : "far_field"; }
std::string_view combiner_name(CombinerKind kind) { return kind == CombinerKind::mrc ? "mrc" : "zf"; }

std::vector<ElementLayout> build_layouts(const ScenarioConfig &config) {
    std::vector<ElementLayout> out;
    for (const auto &spec : config.architectures) out.push_back(make_layout(spec));
    return out;
}

GroupAssignment single_group(int k) { return GroupAssignment{std::vector<int>(static_cast<std::size_t>(k), 0), 1}; }

double rate_for_grouping(const CMatrix &h_true, const CMatrix &h_model, CombinerKind kind, double tx_power,
                         const GroupAssignment &groups) {
    const CMatrix w = grouped_combiner(h_model, kind, groups);
    const auto sinr = sinr_per_user(w, h_true, tx_power, 1.0, groups);
    return sum_rate(sinr, groups);
}

/// Orthonormal basis of the numerical column space (singular values above
/// 1e-10 of the largest). Dense random drops can put two users inside one
/// resolution cell of a small aperture; the null space is still well defined.
CMatrix column_basis(const CMatrix &h) {
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU);
    const auto &sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-10 * sv[0]) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Thresholds tried by GroupingMode::best: 0.1, 0.2, ..., 0.9 and the configured one.
std::vector<double> grouping_ladder(double configured) {
    std::vector<double> taus{configured};
    for (int i = 1; i <= 9; ++i)
        if (std::abs(i / 10.0 - configured) > 1e-12) taus.push_back(i / 10.0);
    return taus;
}

} // namespace

void validate(const ScenarioConfig &config) {
    require(config.carrier_hz > 0.0, "carrier_hz must be positive");
    require(!config.architectures.empty(), "at least one architecture is required");
    require(config.k_users >= 1, "k_users must be >= 1");
    require(config.disk.radius >= 0.0, "disk radius must be >= 0");
    require(config.disk.center_range > 0.0, "disk center range must be positive");
    for (double r : config.radii) require(r >= 0.0, "radius sweep values must be >= 0");
    require(config.target_range > 0.0, "target range must be positive");
    require(std::abs(config.target_angle) < std::numbers::pi / 2.0, "target angle must be within (-90, 90) degrees");
    require(config.grouping_threshold >= 0.0 && config.grouping_threshold <= 1.0, "grouping threshold must be in [0, 1]");
    require(config.snapshots >= 1, "snapshots must be >= 1");
    require(config.trials >= 1, "trials must be >= 1");
    require(config.grid_step > 0.0 && config.grid_step < 0.5, "grid step must be in (0, 0.5)");
    require(!config.beamforming_models.empty(), "at least one beamforming model is required");
}

std::vector<UserPosition> drop_users(std::uint64_t seed, const UserDisk &disk, int k) {
    require(k >= 0, "user count must be non-negative");
    require(disk.radius >= 0.0, "disk radius must be >= 0");
    require(std::abs(disk.center_angle) < std::numbers::pi / 2.0, "disk center angle must be within (-90, 90) degrees");
    require(disk.radius < disk.center_range * std::cos(disk.center_angle),
            "user disk crosses the array plane (minimum range <= 0)");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cx = disk.center_range * std::sin(disk.center_angle);
    const double cy = disk.center_range * std::cos(disk.center_angle);
    std::vector<UserPosition> users;
    users.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double rho = disk.radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const double x = cx + rho * std::cos(phi);
        const double y = cy + rho * std::sin(phi);
        users.push_back({std::hypot(x, y), std::atan2(x, y)});
    }
    return users;
}

CMatrix user_channels(const ElementLayout &layout, double wavelength, std::span<const UserPosition> users,
                      ChannelModel model) {
    CMatrix h(static_cast<Eigen::Index>(layout.size()), static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k) {
        const auto &u = users[k];
        const double g = free_space_gain(wavelength, u.range);
        h.col(static_cast<Eigen::Index>(k)) =
            g * (model == ChannelModel::near_field ? steer_near(layout, wavelength, u.range, u.angle)
                                                   : steer_far(layout, u.angle));
    }
    return h;
}

CMatrix combiner(const CMatrix &h, CombinerKind kind) {
    if (kind == CombinerKind::mrc) return h;
    require(h.cols() <= h.rows(), "ZF needs K <= M");
    if (h.cols() == 0) return h;
    Eigen::ColPivHouseholderQR<CMatrix> qr(h);
    require(qr.rank() == h.cols(), "ZF needs full column rank user channels");
    const CMatrix gram = h.adjoint() * h;
    return h * gram.ldlt().solve(CMatrix::Identity(h.cols(), h.cols()));
}

std::vector<double> sinr_per_user(const CMatrix &w, const CMatrix &h, double tx_power, double noise_power,
                                  const GroupAssignment &groups) {
    require(w.rows() == h.rows() && w.cols() == h.cols(), "combiner and channel shapes differ");
    require(static_cast<Eigen::Index>(groups.group.size()) == h.cols(), "one group index per user");
    const CMatrix cross = w.adjoint() * h; // cross(k, j) = w_k^H h_j
    std::vector<double> out(static_cast<std::size_t>(h.cols()));
    for (Eigen::Index k = 0; k < h.cols(); ++k) {
        double interference = 0.0;
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            if (j != k && groups.group[static_cast<std::size_t>(j)] == groups.group[static_cast<std::size_t>(k)])
                interference += std::norm(cross(k, j));
        const double signal = tx_power * std::norm(cross(k, k));
        out[static_cast<std::size_t>(k)] = signal / (tx_power * interference + noise_power * w.col(k).squaredNorm());
    }
    return out;
}

double sum_rate(std::span<const double> sinrs, const GroupAssignment &groups) {
    require(groups.count >= 1, "group count must be >= 1");
    double acc = 0.0;
    for (double s : sinrs) acc += std::log2(1.0 + s);
    return acc / static_cast<double>(groups.count);
}

GroupAssignment group_users(const CMatrix &h, double tau) {
    require(tau >= 0.0 && tau <= 1.0, "grouping threshold must be in [0, 1]");
    const auto k = static_cast<std::size_t>(h.cols());
    const Eigen::VectorXd norms = h.colwise().norm();
    const CMatrix gram = h.adjoint() * h;
    std::vector<std::vector<std::size_t>> adj(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const double corr = std::abs(gram(ii, jj)) / (norms[ii] * norms[jj]);
            if (corr > tau) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });

    GroupAssignment out{std::vector<int>(k, -1), k == 0 ? 1 : 0};
    for (std::size_t u : order) {
        std::vector<char> used(k + 1, 0);
        for (std::size_t v : adj[u])
            if (out.group[v] >= 0) used[static_cast<std::size_t>(out.group[v])] = 1;
        int color = 0;
        while (used[static_cast<std::size_t>(color)]) ++color;
        out.group[u] = color;
        out.count = std::max(out.count, color + 1);
    }
    return out;
}

CMatrix grouped_combiner(const CMatrix &h, CombinerKind kind, const GroupAssignment &groups) {
    if (kind == CombinerKind::mrc) return h;
    CMatrix w(h.rows(), h.cols());
    for (int g = 0; g < groups.count; ++g) {
        std::vector<Eigen::Index> members;
        for (std::size_t k = 0; k < groups.group.size(); ++k)
            if (groups.group[k] == g) members.push_back(static_cast<Eigen::Index>(k));
        CMatrix sub(h.rows(), static_cast<Eigen::Index>(members.size()));
        for (std::size_t i = 0; i < members.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = h.col(members[i]);
        const CMatrix ws = combiner(sub, kind);
        for (std::size_t i = 0; i < members.size(); ++i) w.col(members[i]) = ws.col(static_cast<Eigen::Index>(i));
    }
    return w;
}

std::vector<ResultRow> run_rate_experiment(const ScenarioConfig &config, int jobs) {
    validate(config);
    require(!config.radii.empty(), "radius sweep is empty");
    const auto layouts = build_layouts(config);
    const double wavelength = wavelength_for(config.carrier_hz);
    const double g_ref = free_space_gain(wavelength, config.disk.center_range);
    const double tx_power = db_to_linear(config.rate_snr_db) / (g_ref * g_ref);
    for (double r : config.radii) {
        UserDisk d = config.disk;
        d.radius = r;
        drop_users(0, d, 0); // geometry check before any work
    }

    const std::size_t n_arch = layouts.size();
    const std::size_t n_model = config.beamforming_models.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    const std::size_t per_task = n_arch * n_model;
    // results[(radius * trials + trial) * per_task + arch * n_model + model]
    std::vector<double> results(config.radii.size() * trials * per_task);

    parallel_for(config.radii.size() * trials, jobs, [&](std::size_t task) {
        const std::size_t ri = task / trials;
        const std::size_t trial = task % trials;
        UserDisk disk = config.disk;
        disk.radius = config.radii[ri];
        const auto users = drop_users(derive_seed(config.master_seed, {1, ri, trial}), disk, config.k_users);
        for (std::size_t a = 0; a < n_arch; ++a) {
            const CMatrix h_true = user_channels(layouts[a], wavelength, users, ChannelModel::near_field);
            for (std::size_t mi = 0; mi < n_model; ++mi) {
                const auto model = config.beamforming_models[mi];
                const CMatrix h_model =
                    model == ChannelModel::near_field ? h_true : user_channels(layouts[a], wavelength, users, model);
                double rate = 0.0;
                switch (config.grouping) {
                case GroupingMode::none:
                    rate = rate_for_grouping(h_true, h_model, config.combiner, tx_power, single_group(config.k_users));
                    break;
                case GroupingMode::greedy:
                    rate = rate_for_grouping(h_true, h_model, config.combiner, tx_power,
                                             group_users(h_model, config.grouping_threshold));
                    break;
                case GroupingMode::best:
                    rate = rate_for_grouping(h_true, h_model, config.combiner, tx_power, single_group(config.k_users));
                    for (double tau : grouping_ladder(config.grouping_threshold))
                        rate = std::max(rate, rate_for_grouping(h_true, h_model, config.combiner, tx_power,
                                                                group_users(h_model, tau)));
                    break;
                }
                results[task * per_task + a * n_model + mi] = rate;
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t ri = 0; ri < config.radii.size(); ++ri)
        for (std::size_t a = 0; a < n_arch; ++a)
            for (std::size_t mi = 0; mi < n_model; ++mi) {
                std::vector<double> samples(trials);
                for (std::size_t t = 0; t < trials; ++t)
                    samples[t] = results[(ri * trials + t) * per_task + a * n_model + mi];
                const auto s = summarize(samples);
                rows.push_back({"radius_m", config.radii[ri], layouts[a].label(),
                                "sum_rate_" + std::string(model_name(config.beamforming_models[mi])) + "_" +
                                    std::string(combiner_name(config.combiner)),
                                s.mean, s.std_error, config.trials, config.master_seed});
            }
    return rows;
}

std::vector<ResultRow> run_sensing_experiment(const ScenarioConfig &config, int jobs) {
    validate(config);
    require(!config.snr_db.empty(), "SNR sweep is empty");
    const auto layouts = build_layouts(config);
    const double wavelength = wavelength_for(config.carrier_hz);
    const double g_ref = free_space_gain(wavelength, config.disk.center_range);
    drop_users(0, config.disk, 0);
    for (const auto &layout : layouts)
        require(static_cast<int>(layout.size()) > config.k_users + 1,
                "layout " + layout.label() + " has too few elements to null " + std::to_string(config.k_users) + " users");

    std::vector<std::vector<double>> grids;
    for (const auto &layout : layouts) grids.push_back(sin_grid_for(layout, config.grid_step));
    const std::vector<double> known_range{config.target_range};

    const std::size_t n_arch = layouts.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    // errors[(snr * trials + trial) * n_arch + arch]; NaN marks an estimation failure
    std::vector<double> errors(config.snr_db.size() * trials * n_arch);

    parallel_for(config.snr_db.size() * trials, jobs, [&](std::size_t task) {
        const std::size_t si = task / trials;
        const std::size_t trial = task % trials;
        const double target_power = db_to_linear(config.snr_db[si]);
        const double user_power = target_power * db_to_linear(config.user_to_target_db) / (g_ref * g_ref);
        const auto users = drop_users(derive_seed(config.master_seed, {2, si, trial}), config.disk, config.k_users);
        for (std::size_t a = 0; a < n_arch; ++a) {
            const auto &layout = layouts[a];
            const CMatrix h_users = user_channels(layout, wavelength, users, ChannelModel::near_field);
            CMatrix channels(h_users.rows(), h_users.cols() + 1);
            channels << h_users, steer_near(layout, wavelength, config.target_range, config.target_angle);
            std::vector<double> powers(static_cast<std::size_t>(config.k_users), user_power);
            powers.push_back(target_power);
            const auto snap = simulate_snapshots_from_channels(layout, wavelength, channels, powers, false,
                                                               config.snapshots, 1.0,
                                                               derive_seed(config.master_seed, {3, si, trial, a}));
            double err = std::numeric_limits<double>::quiet_NaN();
            try {
                const auto rep = zf_music(snap, column_basis(h_users), 1, grids[a],
                                          config.target_range_known ? std::span<const double>(known_range)
                                                                    : std::span<const double>());
                err = rep.angles.front() - config.target_angle;
            } catch (const EstimationError &) {
            }
            errors[task * n_arch + a] = err;
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t si = 0; si < config.snr_db.size(); ++si)
        for (std::size_t a = 0; a < n_arch; ++a) {
            // A failed trial counts as the largest possible error, pi/2.
            std::vector<double> sq(trials);
            double failures = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                double e = errors[(si * trials + t) * n_arch + a];
                if (std::isnan(e)) {
                    e = std::numbers::pi / 2.0;
                    failures += 1.0;
                }
                sq[t] = e * e;
            }
            const auto s = summarize(sq);
            const double value = std::sqrt(s.mean) / std::numbers::pi;
            // delta method: se(sqrt(x)) = se(x) / (2 sqrt(x))
            const double se = s.mean > 0.0 ? s.std_error / (2.0 * std::sqrt(s.mean)) / std::numbers::pi : 0.0;
            rows.push_back({"snr_db", config.snr_db[si], layouts[a].label(), "nrmse_doa", value, se, config.trials,
                            config.master_seed});
            rows.push_back({"snr_db", config.snr_db[si], layouts[a].label(), "failure_rate",
                            failures / static_cast<double>(trials), 0.0, config.trials, config.master_seed});
        }
    return rows;
}

void write_result_csv(std::ostream &os, std::span<const ResultRow> rows) {
    os << "sweep_var,sweep_value,architecture,metric,mean,stderr,trials,seed\n";
    for (const auto &r : rows)
        os << r.sweep_var << ',' << format_number(r.sweep_value) << ",\"" << r.architecture << "\"," << r.metric << ','
           << format_number(r.mean) << ',' << format_number(r.std_error) << ',' << r.trials << ',' << r.seed << '\n';
}

} // namespace sparsemimo
