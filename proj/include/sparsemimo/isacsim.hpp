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

#include "sparsemimo/estimation.hpp"
#include "sparsemimo/geometry.hpp"
#include "sparsemimo/steering.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sparsemimo {

/// Uplink multi-user ISAC scenario.
///
/// The physical channel is always the exact spherical-wavefront one;
/// `beamforming_models` selects which model the receiver assumes when it
/// builds combiners and user groups (far field = plane-wave steering toward
/// the user's angle). Powers follow a per-antenna receive-SNR convention at
/// the disk center range with unit noise power.
enum class ChannelModel { far_field, near_field };
enum class CombinerKind { mrc, zf };
/// none: one group. greedy: group_users at the configured threshold.
/// best: per drop, the highest sum rate over one group and greedy grouping
/// at thresholds 0.1, 0.2, ..., 0.9 plus the configured one.
enum class GroupingMode { none, greedy, best };

struct UserDisk {
    double center_range = 200.0;
    double center_angle = 0.0;
    double radius = 10.0;
};

struct UserPosition {
    double range = 0.0;
    double angle = 0.0;
};

struct ScenarioConfig {
    double carrier_hz = 28e9;
    std::vector<std::string> architectures{"ca(m=128)"};
    int k_users = 30;
    UserDisk disk;
    std::vector<double> radii{10.0};        ///< rate experiment sweep [m]
    double target_range = 200.0;            ///< [m]
    double target_angle = 70.0 * std::numbers::pi / 180.0;
    std::vector<double> snr_db{0.0};        ///< sensing sweep (target echo, per antenna)
    double rate_snr_db = 10.0;              ///< per-antenna receive SNR at the disk center range
    double user_to_target_db = 0.0;         ///< user vs target per-antenna power in sensing
    std::vector<ChannelModel> beamforming_models{ChannelModel::near_field};
    CombinerKind combiner = CombinerKind::mrc;
    GroupingMode grouping = GroupingMode::greedy;
    double grouping_threshold = 0.5;
    int snapshots = 100;
    bool target_range_known = true;
    double grid_step = 1e-3;                ///< max sin-domain grid step
    int trials = 1;
    std::uint64_t master_seed = 1;
};

void validate(const ScenarioConfig &config);

struct GroupAssignment {
    std::vector<int> group;
    int count = 1;
};

struct ResultRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string architecture;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0; ///< standard error of the mean
    int trials = 0;
    std::uint64_t seed = 0;
};

std::vector<UserPosition> drop_users(std::uint64_t seed, const UserDisk &disk, int k);

/// Column k = lambda/(4 pi r_k) * steering vector of user k.
CMatrix user_channels(const ElementLayout &layout, double wavelength, std::span<const UserPosition> users,
                      ChannelModel model);

CMatrix combiner(const CMatrix &h, CombinerKind kind);

/// SINR_k = P|w_k^H h_k|^2 / (P sum_{j != k, same group} |w_k^H h_j|^2 + noise ||w_k||^2).
std::vector<double> sinr_per_user(const CMatrix &w, const CMatrix &h, double tx_power, double noise_power,
                                  const GroupAssignment &groups);

/// sum_k log2(1 + SINR_k) / G.
double sum_rate(std::span<const double> sinrs, const GroupAssignment &groups);

/// Greedy coloring (descending degree) of the graph linking users whose
/// normalized channel correlation exceeds tau.
GroupAssignment group_users(const CMatrix &h, double tau);

/// Per-group combiners (ZF inverts within each group only).
CMatrix grouped_combiner(const CMatrix &h, CombinerKind kind, const GroupAssignment &groups);

std::vector<ResultRow> run_rate_experiment(const ScenarioConfig &config, int jobs = 1);
std::vector<ResultRow> run_sensing_experiment(const ScenarioConfig &config, int jobs = 1);

/// Header "sweep_var,sweep_value,architecture,metric,mean,stderr,trials,seed".
void write_result_csv(std::ostream &os, std::span<const ResultRow> rows);

} // namespace sparsemimo
