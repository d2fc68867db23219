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

#include "cli.hpp"

#include "sparsemimo/coarray.hpp"
#include "sparsemimo/estimation.hpp"
#include "sparsemimo/geometry.hpp"
#include "sparsemimo/isacsim.hpp"
#include "sparsemimo/patterns.hpp"
#include "sparsemimo/steering.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

namespace py = pybind11;
using namespace sparsemimo;

namespace {

SnapshotSet as_snapshots(const ElementLayout &layout, const CMatrix &data, double wavelength) {
    if (data.rows() != static_cast<Eigen::Index>(layout.size()))
        throw std::invalid_argument("snapshot rows must match the element count");
    return SnapshotSet{data, layout, wavelength};
}

py::dict report_dict(const EstimateReport &r) {
    py::dict d;
    d["angles"] = r.angles;
    d["ranges"] = r.ranges;
    d["spectrum_grid"] = r.spectrum_grid;
    d["spectrum"] = r.spectrum;
    d["range_degenerate"] = std::vector<bool>(r.range_degenerate.begin(), r.range_degenerate.end());
    d["residual_norms"] = r.residual_norms;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse linear arrays: geometry, co-arrays, patterns, DOA estimation and ISAC simulation";
    m.attr("__version__") = SPARSEMIMO_VERSION;

    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);

    py::class_<ElementLayout>(m, "ElementLayout")
        .def(py::init([](std::vector<double> positions) { return make_custom(std::move(positions)); }),
             py::arg("positions"))
        .def_property_readonly("positions",
                               [](const ElementLayout &l) {
                                   return std::vector<double>(l.positions().begin(), l.positions().end());
                               })
        .def_property_readonly("label", &ElementLayout::label)
        .def_property_readonly("architecture",
                               [](const ElementLayout &l) { return std::string(architecture_name(l.architecture())); })
        .def("__len__", &ElementLayout::size)
        .def("__eq__", [](const ElementLayout &a, const ElementLayout &b) { return a == b; })
        .def("__repr__", [](const ElementLayout &l) { return "ElementLayout('" + l.label() + "')"; });

    m.def("make_layout", &make_layout, py::arg("spec"), "Layout from a spec such as 'na(min=8,mou=8)'.");
    m.def("make_compact", &make_compact, py::arg("m"));
    m.def("make_usa", &make_usa, py::arg("m"), py::arg("eta"));
    m.def("make_moa", &make_moa, py::arg("n_modules"), py::arg("module_size"), py::arg("module_spacing"));
    m.def("make_nested", &make_nested, py::arg("m_inner"), py::arg("m_outer"));
    m.def("make_coprime", &make_coprime, py::arg("m_first"), py::arg("m_second"));
    m.def("make_mra", &make_mra, py::arg("m"));
    m.def("make_emra", &make_emra, py::arg("n_sub"), py::arg("sub_m"));
    m.def("mra_search", &mra_search, py::arg("m"), py::arg("max_aperture"));
    m.def("wavelength_for", &wavelength_for, py::arg("carrier_hz"));
    m.def("on_integer_grid", [](const ElementLayout &l) { return on_integer_grid(l); }, py::arg("layout"));
    m.def("is_uniform", [](const ElementLayout &l) { return is_uniform(l); }, py::arg("layout"));
    m.def(
        "aperture",
        [](const ElementLayout &l, const std::string &convention, double wavelength) {
            if (convention != "span" && convention != "count")
                throw std::invalid_argument("convention must be 'span' or 'count'");
            return aperture(l, convention == "span" ? ApertureConvention::span : ApertureConvention::count,
                            wavelength);
        },
        py::arg("layout"), py::arg("convention"), py::arg("wavelength"));

    py::class_<LagProfile>(m, "LagProfile")
        .def_readonly("lags", &LagProfile::lags)
        .def_readonly("weights", &LagProfile::weights)
        .def("weight_at", &LagProfile::weight_at, py::arg("lag"));
    m.def("difference_coarray", &difference_coarray, py::arg("layout"));
    m.def("sum_coarray", &sum_coarray, py::arg("layout"));
    m.def("max_contiguous", &max_contiguous, py::arg("profile"));
    m.def("holes", &holes, py::arg("profile"));
    m.def("sensing_dof", &sensing_dof, py::arg("layout"));

    m.def(
        "steer_far",
        [](const ElementLayout &l, double angle) { return CVector(steer_far(l, angle)); },
        py::arg("layout"), py::arg("angle"));
    m.def(
        "steer_near",
        [](const ElementLayout &l, double wavelength, double range, double angle) {
            return CVector(steer_near(l, wavelength, range, angle));
        },
        py::arg("layout"), py::arg("wavelength"), py::arg("range"), py::arg("angle"));

    m.def(
        "farfield_pattern",
        [](const ElementLayout &l, const std::vector<double> &grid) {
            auto c = farfield_pattern(l, grid);
            return py::make_tuple(c.delta_theta, c.gain);
        },
        py::arg("layout"), py::arg("grid"), "Returns (delta_theta, gain) sorted by delta_theta.");
    m.def("closed_form_compact_pattern", &closed_form_compact_pattern, py::arg("m"), py::arg("delta_theta"));
    m.def(
        "nearfield_focus_pattern",
        [](const ElementLayout &l, double wavelength, double focus_range, double focus_angle,
           const std::vector<double> &ranges, const std::vector<double> &angles) {
            const auto g = nearfield_focus_pattern(l, wavelength, {focus_range, focus_angle}, ranges, angles);
            Eigen::MatrixXd out(g.ranges.size(), g.angles.size());
            for (std::size_t i = 0; i < g.ranges.size(); ++i)
                for (std::size_t j = 0; j < g.angles.size(); ++j) out(i, j) = g.at(i, j);
            const auto depth = depth_3db(g);
            return py::make_tuple(out, py::make_tuple(depth.r_lo, depth.r_hi));
        },
        py::arg("layout"), py::arg("wavelength"), py::arg("focus_range"), py::arg("focus_angle"), py::arg("ranges"),
        py::arg("angles"), "Returns (gain[range, angle], (depth_lo, depth_hi)).");

    m.def(
        "simulate_snapshots",
        [](const ElementLayout &l, double wavelength, const std::vector<double> &angles, std::vector<double> ranges,
           std::vector<double> powers, bool coherent, int snapshots, double noise_power, std::uint64_t seed) {
            SourceScene scene;
            scene.coherent = coherent;
            if (ranges.empty()) ranges.assign(angles.size(), std::numeric_limits<double>::infinity());
            if (powers.empty()) powers.assign(angles.size(), 1.0);
            if (ranges.size() != angles.size() || powers.size() != angles.size())
                throw std::invalid_argument("angles, ranges and powers must have equal length");
            for (std::size_t i = 0; i < angles.size(); ++i) scene.sources.push_back({angles[i], ranges[i], powers[i]});
            return simulate_snapshots(l, wavelength, scene, snapshots, noise_power, seed).data;
        },
        py::arg("layout"), py::arg("wavelength"), py::arg("angles"), py::arg("ranges") = std::vector<double>{},
        py::arg("powers") = std::vector<double>{}, py::arg("coherent") = false, py::arg("snapshots") = 100,
        py::arg("noise_power") = 0.01, py::arg("seed") = 1);
    m.def(
        "sample_covariance",
        [](const ElementLayout &l, const CMatrix &x) { return sample_covariance(as_snapshots(l, x, 1.0)).matrix; },
        py::arg("layout"), py::arg("snapshots"));
    m.def("sin_grid", &sin_grid, py::arg("step") = 1e-3);
    m.def(
        "music",
        [](const ElementLayout &l, const CMatrix &r, int k, const std::vector<double> &grid) {
            return report_dict(music_far(Covariance{r}, l, k, grid));
        },
        py::arg("layout"), py::arg("covariance"), py::arg("k"), py::arg("grid"));
    m.def(
        "smooth_music",
        [](const ElementLayout &l, const CMatrix &x, int k, int subarray_len, const std::vector<double> &grid) {
            const auto r = spatial_smoothing(as_snapshots(l, x, 1.0), subarray_len);
            return report_dict(music_far(r, leading_subarray(l, static_cast<std::size_t>(subarray_len)), k, grid));
        },
        py::arg("layout"), py::arg("snapshots"), py::arg("k"), py::arg("subarray_len"), py::arg("grid"));
    m.def(
        "coarray_music",
        [](const ElementLayout &l, const CMatrix &r, int k, const std::vector<double> &grid) {
            return report_dict(coarray_music(Covariance{r}, l, k, grid));
        },
        py::arg("layout"), py::arg("covariance"), py::arg("k"), py::arg("grid"));
    m.def(
        "two_stage_near",
        [](const ElementLayout &l, const CMatrix &x, double wavelength, int k, const std::vector<double> &grid,
           const std::vector<double> &range_grid, double reference_range) {
            return report_dict(two_stage_near(as_snapshots(l, x, wavelength), k, grid, range_grid, reference_range));
        },
        py::arg("layout"), py::arg("snapshots"), py::arg("wavelength"), py::arg("k"), py::arg("grid"),
        py::arg("range_grid"), py::arg("reference_range") = std::numeric_limits<double>::infinity());
    m.def(
        "polar_omp",
        [](const ElementLayout &l, const CMatrix &x, double wavelength, int k, const std::vector<double> &angle_grid,
           const std::vector<double> &range_rings) {
            return report_dict(polar_omp(as_snapshots(l, x, wavelength), k, angle_grid, range_rings));
        },
        py::arg("layout"), py::arg("snapshots"), py::arg("wavelength"), py::arg("k"), py::arg("angle_grid"),
        py::arg("range_rings"));
    m.def(
        "zf_music",
        [](const ElementLayout &l, const CMatrix &x, double wavelength, const CMatrix &users, int k,
           const std::vector<double> &grid, const std::vector<double> &range_grid) {
            return report_dict(zf_music(as_snapshots(l, x, wavelength), users, k, grid, range_grid));
        },
        py::arg("layout"), py::arg("snapshots"), py::arg("wavelength"), py::arg("user_channels"), py::arg("k"),
        py::arg("grid"), py::arg("range_grid") = std::vector<double>{});
    m.def(
        "nrmse", [](const std::vector<double> &est, double truth) { return nrmse(est, truth); }, py::arg("estimates"),
        py::arg("truth"));

    m.def(
        "user_channels",
        [](const ElementLayout &l, double wavelength, const std::vector<std::pair<double, double>> &users,
           const std::string &model) {
            std::vector<UserPosition> pos;
            for (const auto &[r, a] : users) pos.push_back({r, a});
            if (model != "near_field" && model != "far_field")
                throw std::invalid_argument("model must be 'near_field' or 'far_field'");
            return user_channels(l, wavelength, pos,
                                 model == "near_field" ? ChannelModel::near_field : ChannelModel::far_field);
        },
        py::arg("layout"), py::arg("wavelength"), py::arg("users"), py::arg("model") = "near_field",
        "users: list of (range_m, angle_rad).");
    m.def(
        "group_users",
        [](const CMatrix &h, double tau) {
            const auto g = group_users(h, tau);
            return py::make_tuple(g.group, g.count);
        },
        py::arg("channels"), py::arg("tau"), "Returns (group index per user, group count).");

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the sparsemimo command line in-process; returns (exit_code, stdout, stderr).");
}
