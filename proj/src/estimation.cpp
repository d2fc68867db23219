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

#include "sparsemimo/estimation.hpp"
#include "sparsemimo/coarray.hpp"
#include "sparsemimo/format.hpp"
#include "sparsemimo/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <ostream>

namespace sparsemimo {

namespace {

using SteerFn = std::function<CVector(double)>;

void require(bool cond, const std::string &msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// MUSIC pseudo-spectrum ||b||^2 / ||E_n^H b||^2 with b the steering vector
/// projected away from an optional user subspace. The noise-subspace energy
/// is computed as ||b||^2 - ||E_s^H b||^2, which only needs the signal basis.
class MusicSpectrum {
  public:
    MusicSpectrum(CMatrix signal_basis, CMatrix user_basis)
        : users_(user_basis.cols()), basis_(signal_basis.rows(), user_basis.cols() + signal_basis.cols()) {
        basis_ << user_basis, signal_basis;
    }

    double operator()(const CVector &a) const {
        const CVector g = basis_.adjoint() * a;
        return value(a.squaredNorm(), g);
    }

    std::vector<double> evaluate(const SteerFn &steer, std::span<const double> xs) const {
        constexpr Eigen::Index chunk = 256;
        std::vector<double> out(xs.size());
        const auto n = static_cast<Eigen::Index>(xs.size());
        CMatrix a(basis_.rows(), chunk);
        for (Eigen::Index start = 0; start < n; start += chunk) {
            const Eigen::Index count = std::min(chunk, n - start);
            for (Eigen::Index c = 0; c < count; ++c) a.col(c) = steer(xs[static_cast<std::size_t>(start + c)]);
            const CMatrix g = basis_.adjoint() * a.leftCols(count);
            for (Eigen::Index c = 0; c < count; ++c)
                out[static_cast<std::size_t>(start + c)] = value(a.col(c).squaredNorm(), g.col(c));
        }
        return out;
    }

    /// Squared norm of the steering vector after removing the user subspace.
    double projected_norm2(const CVector &a) const {
        return a.squaredNorm() - (basis_.leftCols(users_).adjoint() * a).squaredNorm();
    }

  private:
    double value(double norm2, const CVector &g) const {
        const double user_part = g.head(users_).squaredNorm();
        const double s = norm2 - user_part;
        if (s <= 1e-9 * norm2) return 0.0;
        const double signal_part = g.tail(g.size() - users_).squaredNorm();
        const double noise_part = std::max(s - signal_part, s * 1e-14);
        return s / noise_part;
    }

    Eigen::Index users_;
    CMatrix basis_;
};

CMatrix principal_eigenvectors(const CMatrix &r, int k, Eigen::VectorXd *eigenvalues = nullptr) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    if (es.info() != Eigen::Success) throw EstimationError("eigendecomposition failed");
    if (eigenvalues) *eigenvalues = es.eigenvalues();
    return es.eigenvectors().rightCols(k);
}

std::vector<std::size_t> top_peaks(const std::vector<double> &p, int k) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        if (p[i] > p[i - 1] && p[i] >= p[i + 1]) peaks.push_back(i);
    if (static_cast<int>(peaks.size()) < k)
        throw EstimationError("spectrum has " + std::to_string(peaks.size()) + " peaks, " + std::to_string(k) +
                              " requested");
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    peaks.resize(static_cast<std::size_t>(k));
    return peaks;
}

/// Vertex offset of the parabola through (-1, y0), (0, y1), (1, y2), in [-1, 1].
double parabolic_offset(double y0, double y1, double y2) {
    const double den = y0 - 2.0 * y1 + y2;
    if (!(den < 0.0)) return 0.0;
    return std::clamp(0.5 * (y0 - y2) / den, -1.0, 1.0);
}

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

/// Locates the maximum of f on [lo, hi] with a fine uniform scan and a
/// parabolic fit on the log values around the best sample.
double refine_max(const std::function<double(double)> &f, double lo, double hi, int points = 17) {
    std::vector<double> xs = std::vector<double>(static_cast<std::size_t>(points));
    std::vector<double> ys(xs.size());
    for (int i = 0; i < points; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
        ys[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }
    const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    if (best == 0 || best + 1 == xs.size()) return xs[best];
    const double off = parabolic_offset(safe_log(ys[best - 1]), safe_log(ys[best]), safe_log(ys[best + 1]));
    return xs[best] + off * (xs[best + 1] - xs[best]);
}

/// Peaks of a sampled spectrum, each refined between its grid neighbours.
std::vector<double> spectrum_peaks(const MusicSpectrum &spec, const SteerFn &steer, std::span<const double> grid,
                                   const std::vector<double> &p, int k) {
    std::vector<double> out;
    for (std::size_t i : top_peaks(p, k)) {
        auto f = [&](double x) { return spec(steer(x)); };
        out.push_back(refine_max(f, grid[i - 1], grid[i + 1]));
    }
    return out;
}

void check_grid(std::span<const double> grid) {
    require(grid.size() >= 3, "estimation grid needs at least 3 samples");
    for (std::size_t i = 1; i < grid.size(); ++i) require(grid[i] > grid[i - 1], "estimation grid must be increasing");
}

void check_sin_grid(std::span<const double> grid) {
    check_grid(grid);
    require(grid.front() >= -1.0 && grid.back() <= 1.0, "sin-domain grid must lie within [-1, 1]");
}

void sort_report(EstimateReport &rep) {
    std::vector<std::size_t> idx(rep.angles.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rep.angles[a] < rep.angles[b]; });
    auto permute = [&](auto &v) {
        if (v.size() != idx.size()) return;
        auto copy = v;
        for (std::size_t i = 0; i < idx.size(); ++i) v[i] = copy[idx[i]];
    };
    permute(rep.angles);
    permute(rep.ranges);
    permute(rep.range_degenerate);
}

EstimateReport far_search(const MusicSpectrum &spec, const ElementLayout &layout, int k,
                          std::span<const double> grid) {
    const SteerFn steer = [&](double u) { return steer_far_sin(layout, u); };
    EstimateReport rep;
    rep.spectrum_grid.assign(grid.begin(), grid.end());
    rep.spectrum = spec.evaluate(steer, grid);
    for (double u : spectrum_peaks(spec, steer, grid, rep.spectrum, k)) rep.angles.push_back(std::asin(std::clamp(u, -1.0, 1.0)));
    sort_report(rep);
    return rep;
}

/// Interpolates a grid value at a fractional index, geometrically when the
/// grid is positive (range grids are typically log-spaced).
double grid_at(std::span<const double> grid, std::size_t i, double offset) {
    if (offset == 0.0) return grid[i];
    const std::size_t j = offset > 0 ? i + 1 : i - 1;
    const double t = std::abs(offset);
    if (grid[i] > 0.0 && grid[j] > 0.0) return grid[i] * std::pow(grid[j] / grid[i], t);
    return grid[i] + t * (grid[j] - grid[i]);
}

EstimateReport near_search(const MusicSpectrum &spec, const ElementLayout &layout, double wavelength, int k,
                           std::span<const double> sin_grid, std::span<const double> range_grid,
                           double reference_range) {
    require(!range_grid.empty(), "range grid is empty");
    for (double r : range_grid) require(r > 0.0, "range grid values must be positive");
    const bool known_range = range_grid.size() == 1;

    const SteerFn stage1 = [&](double u) {
        return steer_near(layout, wavelength, reference_range, std::asin(std::clamp(u, -1.0, 1.0)));
    };
    EstimateReport rep;
    rep.spectrum_grid.assign(sin_grid.begin(), sin_grid.end());
    rep.spectrum = spec.evaluate(stage1, sin_grid);
    const auto coarse = spectrum_peaks(spec, stage1, sin_grid, rep.spectrum, k);

    const double span_d0 = layout.max_position();
    const double span_m = span_d0 * wavelength / 2.0;
    const double beamwidth = 2.0 / span_d0;
    const double step = sin_grid[1] - sin_grid[0];
    const double r_min = *std::min_element(range_grid.begin(), range_grid.end());

    for (double u0 : coarse) {
        // Angle window covering the mismatch between the stage-1 steering and
        // the closest admissible range.
        double half = 2.0 * step;
        if (!known_range || std::isinf(reference_range)) half = std::clamp(span_m / r_min + 2.0 * beamwidth, 2.0 * step, 0.25);
        const int n_u = std::clamp(static_cast<int>(std::ceil(2.0 * half / (0.25 * beamwidth))) | 1, 9, 2001);
        const double u_lo = std::max(-1.0, u0 - half);
        const double u_hi = std::min(1.0, u0 + half);

        std::vector<double> us(static_cast<std::size_t>(n_u));
        for (int i = 0; i < n_u; ++i) us[static_cast<std::size_t>(i)] = u_lo + (u_hi - u_lo) * i / (n_u - 1);

        // Joint (angle, range) scan of the local window.
        std::vector<double> table(us.size() * range_grid.size());
        for (std::size_t ir = 0; ir < range_grid.size(); ++ir) {
            const SteerFn steer = [&](double u) {
                return steer_near(layout, wavelength, range_grid[ir], std::asin(std::clamp(u, -1.0, 1.0)));
            };
            const auto col = spec.evaluate(steer, us);
            for (std::size_t iu = 0; iu < us.size(); ++iu) table[iu * range_grid.size() + ir] = col[iu];
        }
        const auto best = static_cast<std::size_t>(std::max_element(table.begin(), table.end()) - table.begin());
        const std::size_t iu = best / range_grid.size();
        const std::size_t ir = best % range_grid.size();
        auto at = [&](std::size_t a, std::size_t b) { return table[a * range_grid.size() + b]; };

        double range = range_grid[ir];
        bool degenerate = false;
        if (!known_range) {
            double lo = at(iu, 0), hi = at(iu, 0);
            for (std::size_t j = 0; j < range_grid.size(); ++j) {
                lo = std::min(lo, at(iu, j));
                hi = std::max(hi, at(iu, j));
            }
            degenerate = ir == 0 || ir + 1 == range_grid.size() || hi < 1.001 * lo;
            if (ir > 0 && ir + 1 < range_grid.size()) {
                const double off = parabolic_offset(safe_log(at(iu, ir - 1)), safe_log(at(iu, ir)), safe_log(at(iu, ir + 1)));
                range = grid_at(range_grid, ir, off);
            }
        }
        double u = us[iu];
        if (iu > 0 && iu + 1 < us.size()) {
            auto f = [&](double x) {
                return spec(steer_near(layout, wavelength, range, std::asin(std::clamp(x, -1.0, 1.0))));
            };
            u = refine_max(f, us[iu - 1], us[iu + 1]);
        }
        rep.angles.push_back(std::asin(std::clamp(u, -1.0, 1.0)));
        rep.ranges.push_back(range);
        rep.range_degenerate.push_back(degenerate);
    }
    sort_report(rep);
    return rep;
}

} // namespace

SnapshotSet simulate_snapshots_from_channels(const ElementLayout &layout, double wavelength, const CMatrix &channels,
                                             std::span<const double> powers, bool coherent, int snapshots,
                                             double noise_power, std::uint64_t seed) {
    require(snapshots >= 1, "snapshot count must be >= 1");
    require(noise_power >= 0.0, "noise power must be non-negative");
    const auto m = static_cast<Eigen::Index>(layout.size());
    require(channels.rows() == m, "channel rows must match the element count");
    require(static_cast<std::size_t>(channels.cols()) == powers.size(), "one power per channel column");
    for (double p : powers) require(p >= 0.0, "source powers must be non-negative");

    Rng rng(seed);
    const auto k = channels.cols();
    CMatrix s(k, snapshots);
    for (int t = 0; t < snapshots; ++t) {
        if (coherent) {
            const cdouble common = complex_gaussian(rng, 1.0);
            for (Eigen::Index i = 0; i < k; ++i) s(i, t) = std::sqrt(powers[static_cast<std::size_t>(i)]) * common;
        } else {
            for (Eigen::Index i = 0; i < k; ++i) s(i, t) = complex_gaussian(rng, powers[static_cast<std::size_t>(i)]);
        }
    }
    CMatrix noise(m, snapshots);
    for (int t = 0; t < snapshots; ++t)
        for (Eigen::Index i = 0; i < m; ++i) noise(i, t) = complex_gaussian(rng, noise_power);
    return SnapshotSet{channels * s + noise, layout, wavelength};
}

SnapshotSet simulate_snapshots(const ElementLayout &layout, double wavelength, const SourceScene &scene,
                               int snapshots, double noise_power, std::uint64_t seed) {
    CMatrix a(static_cast<Eigen::Index>(layout.size()), static_cast<Eigen::Index>(scene.sources.size()));
    std::vector<double> powers;
    for (std::size_t i = 0; i < scene.sources.size(); ++i) {
        const auto &src = scene.sources[i];
        require(src.power > 0.0, "source power must be positive");
        require(std::abs(src.angle) < std::numbers::pi / 2.0, "source angle must be within (-pi/2, pi/2)");
        a.col(static_cast<Eigen::Index>(i)) = steer_near(layout, wavelength, src.range, src.angle);
        powers.push_back(src.power);
    }
    return simulate_snapshots_from_channels(layout, wavelength, a, powers, scene.coherent, snapshots, noise_power, seed);
}

Covariance sample_covariance(const SnapshotSet &snap) {
    require(snap.snapshots() >= 1, "sample covariance needs at least one snapshot");
    CMatrix r = snap.data * snap.data.adjoint() / static_cast<double>(snap.snapshots());
    CMatrix sym = 0.5 * (r + r.adjoint());
    return Covariance{std::move(sym)};
}

std::vector<double> sin_grid(double step) {
    require(step > 0.0 && step < 0.5, "sin-grid step must be in (0, 0.5)");
    const auto n = static_cast<std::size_t>(std::floor((1.0 - 1e-12) / step));
    std::vector<double> out;
    out.reserve(2 * n + 1);
    for (std::size_t i = n; i >= 1; --i) out.push_back(-static_cast<double>(i) * step);
    out.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(static_cast<double>(i) * step);
    return out;
}

std::vector<double> sin_grid_for(const ElementLayout &layout, double max_step) {
    const double half_beam = 1.0 / layout.max_position();
    return sin_grid(std::min(max_step, half_beam));
}

EstimateReport music_far(const Covariance &r, const ElementLayout &layout, int k, std::span<const double> grid) {
    const auto m = static_cast<int>(layout.size());
    require(r.matrix.rows() == m && r.matrix.cols() == m, "covariance size must match the layout");
    require(k >= 0, "source count must be non-negative");
    require(k < m, "MUSIC needs K < M");
    if (k == 0) return {};
    check_sin_grid(grid);
    MusicSpectrum spec(principal_eigenvectors(r.matrix, k), CMatrix(m, 0));
    return far_search(spec, layout, k, grid);
}

Covariance spatial_smoothing(const SnapshotSet &snap, int subarray_len) {
    require(is_uniform(snap.layout),
            "spatial smoothing requires a uniform layout; unequal spacings break the sub-array shift invariance");
    const auto m = static_cast<int>(snap.layout.size());
    require(subarray_len >= 2 && subarray_len <= m, "sub-array length must be in [2, M]");
    const auto full = sample_covariance(snap).matrix;
    const int count = m - subarray_len + 1;
    CMatrix acc = CMatrix::Zero(subarray_len, subarray_len);
    for (int i = 0; i < count; ++i) acc += full.block(i, i, subarray_len, subarray_len);
    acc /= static_cast<double>(count);
    return Covariance{std::move(acc)};
}

std::vector<cdouble> lag_averaged_correlation(const Covariance &r, const ElementLayout &layout) {
    const auto pos = integer_positions(layout);
    require(r.matrix.rows() == static_cast<Eigen::Index>(pos.size()), "covariance size must match the layout");
    const int extent = max_contiguous(difference_coarray(layout));
    std::vector<cdouble> sum(static_cast<std::size_t>(extent) + 1, cdouble{});
    std::vector<int> count(sum.size(), 0);
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = 0; j < pos.size(); ++j) {
            const int lag = pos[i] - pos[j];
            if (lag < 0 || lag > extent) continue;
            sum[static_cast<std::size_t>(lag)] += r.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            ++count[static_cast<std::size_t>(lag)];
        }
    for (std::size_t l = 0; l < sum.size(); ++l) sum[l] /= static_cast<double>(count[l]);
    return sum;
}

EstimateReport coarray_music(const Covariance &r, const ElementLayout &layout, int k, std::span<const double> grid) {
    require(on_integer_grid(layout), "co-array MUSIC needs an integer-grid layout");
    require(k >= 0, "source count must be non-negative");
    const auto corr = lag_averaged_correlation(r, layout);
    const int extent = static_cast<int>(corr.size()) - 1;
    require(k <= extent, "K = " + std::to_string(k) + " exceeds the co-array DoF " + std::to_string(extent));
    if (k == 0) return {};
    const int n = extent + 1;
    CMatrix toeplitz(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            toeplitz(a, b) = a >= b ? corr[static_cast<std::size_t>(a - b)] : std::conj(corr[static_cast<std::size_t>(b - a)]);
    return music_far(Covariance{std::move(toeplitz)}, make_compact(n), k, grid);
}

EstimateReport two_stage_near(const SnapshotSet &snap, int k, std::span<const double> sin_grid,
                              std::span<const double> range_grid, double reference_range) {
    const auto m = static_cast<int>(snap.layout.size());
    require(k >= 0, "source count must be non-negative");
    require(k < m, "two-stage estimation needs K < M");
    if (k == 0) return {};
    check_sin_grid(sin_grid);
    const auto r = sample_covariance(snap);
    MusicSpectrum spec(principal_eigenvectors(r.matrix, k), CMatrix(m, 0));
    return near_search(spec, snap.layout, snap.wavelength, k, sin_grid, range_grid, reference_range);
}

EstimateReport polar_omp(const SnapshotSet &snap, int k, std::span<const double> angle_grid,
                         std::span<const double> range_rings) {
    require(k >= 1, "OMP needs K >= 1");
    require(!angle_grid.empty() && !range_rings.empty(), "polar dictionary grids must be non-empty");
    const auto atoms = angle_grid.size() * range_rings.size();
    require(atoms >= static_cast<std::size_t>(k), "polar dictionary is smaller than K");
    const auto m = static_cast<Eigen::Index>(snap.layout.size());

    CMatrix dict(m, static_cast<Eigen::Index>(atoms));
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t ir = 0; ir < range_rings.size(); ++ir)
        for (std::size_t ia = 0; ia < angle_grid.size(); ++ia)
            dict.col(static_cast<Eigen::Index>(ir * angle_grid.size() + ia)) =
                steer_near(snap.layout, snap.wavelength, range_rings[ir], angle_grid[ia]) * inv_sqrt_m;

    const CMatrix &y = snap.data;
    CMatrix residual = y;
    std::vector<Eigen::Index> chosen;
    EstimateReport rep;
    for (int it = 0; it < k; ++it) {
        const Eigen::VectorXd score = (dict.adjoint() * residual).rowwise().squaredNorm();
        Eigen::Index best = -1;
        for (Eigen::Index a = 0; a < score.size(); ++a) {
            if (std::find(chosen.begin(), chosen.end(), a) != chosen.end()) continue;
            if (best < 0 || score[a] > score[best]) best = a;
        }
        chosen.push_back(best);
        CMatrix sub(m, static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t c = 0; c < chosen.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = dict.col(chosen[c]);
        const CMatrix coeffs = sub.colPivHouseholderQr().solve(y);
        residual = y - sub * coeffs;
        rep.residual_norms.push_back(residual.norm());

        const auto ir = static_cast<std::size_t>(best) / angle_grid.size();
        const auto ia = static_cast<std::size_t>(best) % angle_grid.size();
        rep.angles.push_back(angle_grid[ia]);
        rep.ranges.push_back(range_rings[ir]);
        rep.range_degenerate.push_back(false);
    }
    sort_report(rep);
    return rep;
}

CMatrix user_null_projector(const CMatrix &channels) {
    const auto m = channels.rows();
    if (channels.cols() == 0) return CMatrix::Identity(m, m);
    Eigen::ColPivHouseholderQR<CMatrix> qr(channels);
    require(qr.rank() == channels.cols(), "user channels are rank deficient");
    const CMatrix q = qr.householderQ() * CMatrix::Identity(m, channels.cols());
    return CMatrix::Identity(m, m) - q * q.adjoint();
}

EstimateReport zf_music(const SnapshotSet &snap, const CMatrix &user_channels, int k_targets,
                        std::span<const double> sin_grid, std::span<const double> range_grid) {
    const auto m = static_cast<Eigen::Index>(snap.layout.size());
    const auto k_users = user_channels.cols();
    require(user_channels.rows() == m || k_users == 0, "user channel rows must match the element count");
    require(k_targets >= 0, "target count must be non-negative");
    require(k_users + k_targets < m, "ZF-MUSIC needs K_u + K_t < M");

    CMatrix q(m, 0);
    if (k_users > 0) {
        Eigen::ColPivHouseholderQR<CMatrix> qr(user_channels);
        require(qr.rank() == k_users, "user channels are rank deficient");
        q = qr.householderQ() * CMatrix::Identity(m, k_users);
    }
    if (k_targets == 0) return {};
    check_sin_grid(sin_grid);

    SnapshotSet projected{snap.data - q * (q.adjoint() * snap.data), snap.layout, snap.wavelength};
    const auto rp = sample_covariance(projected);
    Eigen::VectorXd eig;
    CMatrix signal = principal_eigenvectors(rp.matrix, k_targets, &eig);
    const double reference = sample_covariance(snap).matrix.trace().real() / static_cast<double>(m);
    if (!(eig[m - 1] > 1e-12 * reference))
        throw EstimationError("no signal energy remains after projecting out the users; target unobservable");

    MusicSpectrum spec(std::move(signal), q);
    EstimateReport rep = range_grid.empty()
                             ? far_search(spec, snap.layout, k_targets, sin_grid)
                             : near_search(spec, snap.layout, snap.wavelength, k_targets, sin_grid, range_grid,
                                           range_grid.size() == 1 ? range_grid.front()
                                                                  : std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < rep.angles.size(); ++i) {
        const double range = rep.ranges.empty() ? std::numeric_limits<double>::infinity() : rep.ranges[i];
        const CVector a = steer_near(snap.layout, snap.wavelength, range, rep.angles[i]);
        if (spec.projected_norm2(a) < 1e-6 * static_cast<double>(m))
            throw EstimationError("estimated target direction lies in the user subspace; target unobservable");
    }
    return rep;
}

double nrmse(std::span<const double> estimates, double truth) {
    require(!estimates.empty(), "NRMSE needs at least one trial");
    double acc = 0.0;
    for (double e : estimates) acc += (e - truth) * (e - truth);
    return std::sqrt(acc / static_cast<double>(estimates.size())) / std::numbers::pi;
}

void write_estimate_header(std::ostream &os) { os << "trial,true_angle_rad,est_angle_rad,est_range_m,method\n"; }

void write_estimate_rows(std::ostream &os, int trial, std::span<const double> truth, const EstimateReport &report,
                         const std::string &method) {
    const std::size_t rows = std::max(truth.size(), report.angles.size());
    for (std::size_t i = 0; i < rows; ++i) {
        os << trial << ',';
        if (i < truth.size()) os << format_number(truth[i]);
        os << ',';
        if (i < report.angles.size()) os << format_number(report.angles[i]);
        os << ',';
        if (i < report.ranges.size()) os << format_number(report.ranges[i]);
        os << ',' << method << '\n';
    }
}

} // namespace sparsemimo
