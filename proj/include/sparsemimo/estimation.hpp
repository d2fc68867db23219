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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsemimo {

/// Raised when an estimator cannot produce the requested number of sources
/// (missing spectrum peaks, unobservable target). Input validation errors
/// are std::invalid_argument.
class EstimationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Source {
    double angle = 0.0;                                    ///< radians from broadside
    double range = std::numeric_limits<double>::infinity(); ///< meters; inf = far field
    double power = 1.0;                                    ///< linear
};

struct SourceScene {
    std::vector<Source> sources;
    bool coherent = false; ///< all sources share one waveform
};

/// M x T complex array observations.
struct SnapshotSet {
    CMatrix data;
    ElementLayout layout;
    double wavelength = 1.0;

    Eigen::Index snapshots() const { return data.cols(); }
};

struct Covariance {
    CMatrix matrix;
};

struct EstimateReport {
    std::vector<double> angles; ///< radians, ascending
    std::vector<double> ranges; ///< meters, aligned with angles; empty for far-field estimators
    std::vector<double> spectrum_grid;
    std::vector<double> spectrum;
    /// Per-source flag: the range search ended on the grid boundary or saw a
    /// flat spectrum (source effectively in the far field).
    std::vector<bool> range_degenerate;
    /// OMP residual Frobenius norm after each iteration.
    std::vector<double> residual_norms;
};

/// X = A S + N with columns of A the far/near steering vectors of the scene.
SnapshotSet simulate_snapshots(const ElementLayout &layout, double wavelength, const SourceScene &scene,
                               int snapshots, double noise_power, std::uint64_t seed);

/// X = H S + N for arbitrary channel columns. Row k of S is circular complex
/// Gaussian with power powers[k] (one shared unit-power waveform scaled per
/// column when coherent).
SnapshotSet simulate_snapshots_from_channels(const ElementLayout &layout, double wavelength, const CMatrix &channels,
                                             std::span<const double> powers, bool coherent, int snapshots,
                                             double noise_power, std::uint64_t seed);

/// R = X X^H / T, Hermitian-symmetrized.
Covariance sample_covariance(const SnapshotSet &snap);

/// Uniform sin-domain grid on (-1, 1) with the given step (both ends excluded).
std::vector<double> sin_grid(double step = 1e-3);

/// sin_grid with the step shrunk to at most half a beamwidth of the layout.
std::vector<double> sin_grid_for(const ElementLayout &layout, double max_step = 1e-3);

/// MUSIC over a sin-domain grid. Returns the K largest spectrum peaks, each
/// refined locally. Throws EstimationError when fewer than K peaks exist.
EstimateReport music_far(const Covariance &r, const ElementLayout &layout, int k, std::span<const double> grid);

/// Forward spatial smoothing over the M - L + 1 sliding sub-arrays of a
/// uniform layout. The result belongs to leading_subarray(layout, L).
Covariance spatial_smoothing(const SnapshotSet &snap, int subarray_len);

/// Virtual correlation r(l), l = 0..L, averaged over all element pairs with
/// p_i - p_j = l inside the hole-free co-array segment.
std::vector<cdouble> lag_averaged_correlation(const Covariance &r, const ElementLayout &layout);

/// MUSIC on the (L+1)-element virtual compact array built from the Toeplitz
/// augmentation of the lag-averaged correlation.
EstimateReport coarray_music(const Covariance &r, const ElementLayout &layout, int k, std::span<const double> grid);

/// Near-field estimation: angles from MUSIC with steering at
/// reference_range (far field when infinite), then a range sweep per angle
/// against the same noise subspace, then a joint local refinement.
EstimateReport two_stage_near(const SnapshotSet &snap, int k, std::span<const double> sin_grid,
                              std::span<const double> range_grid,
                              double reference_range = std::numeric_limits<double>::infinity());

/// Simultaneous OMP over the polar dictionary {steer_near(r, theta)}; angles in radians.
EstimateReport polar_omp(const SnapshotSet &snap, int k, std::span<const double> angle_grid,
                         std::span<const double> range_rings);

/// Orthogonal projector onto the complement of span(channels).
CMatrix user_null_projector(const CMatrix &channels);

/// Zero-forcing MUSIC: project the users out of every snapshot, then run
/// far-field MUSIC (or two_stage_near when range_grid is non-empty) with
/// projected steering vectors. A one-element range grid means a known
/// target range and the angle sweep uses that range directly.
EstimateReport zf_music(const SnapshotSet &snap, const CMatrix &user_channels, int k_targets,
                        std::span<const double> sin_grid, std::span<const double> range_grid = {});

/// sqrt(mean (est - truth)^2) / pi.
double nrmse(std::span<const double> estimates, double truth);

/// Rows "trial,true_angle_rad,est_angle_rad,est_range_m,method".
void write_estimate_header(std::ostream &os);
void write_estimate_rows(std::ostream &os, int trial, std::span<const double> truth, const EstimateReport &report,
                         const std::string &method);

} // namespace sparsemimo
