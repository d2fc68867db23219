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

#include "settings.hpp"

#include "sparsemimo/format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef SPARSEMIMO_VERSION
#define SPARSEMIMO_VERSION "unknown"
#endif

namespace sparsemimo::cli {

namespace {

constexpr std::array<KeySpec, 10> kLayoutKeys{{
    {"arch", "", "architecture: ca, usa, moa, na, cpa, mra, emra or custom"},
    {"m", "", "element count (ca, usa, mra), module size (moa) or sub-array size (emra)"},
    {"eta", "", "USA spacing in half wavelengths"},
    {"n", "", "module count (moa) or sub-array count (emra)"},
    {"gamma", "", "MoA module pitch in half wavelengths"},
    {"min", "", "NA inner elements"},
    {"mou", "", "NA outer elements"},
    {"mf", "", "CPA first sub-array elements"},
    {"ms", "", "CPA second sub-array elements"},
    {"positions", "", "custom positions, e.g. \"0 1 4 6\""},
}};

constexpr KeySpec kSeed{"seed", "1", "master seed"};
constexpr KeySpec kLayouts{"layouts", "", "space-separated layout specs, e.g. \"ca(m=16) na(min=8,mou=8)\""};

const std::vector<KeySpec> kPatternKeys{
    kSeed,
    kLayouts,
    {"grid_min", "-1", "first spatial-frequency offset"},
    {"grid_max", "1", "last spatial-frequency offset"},
    {"grid_points", "2001", "offset samples"},
    {"db", "false", "write gain in dB", true},
};

const std::vector<KeySpec> kFocusKeys{
    kSeed,
    kLayouts,
    {"carrier_hz", "28e9", "carrier frequency [Hz]"},
    {"focus_range_m", "200", "focus range [m]"},
    {"focus_angle_deg", "0", "focus angle [deg]"},
    {"range_min_m", "50", "nearest range [m]"},
    {"range_max_m", "10000", "farthest range [m]"},
    {"range_points", "200", "geometric range samples (the focus range is added)"},
    {"angle_min_deg", "-89.5", "first angle [deg]"},
    {"angle_max_deg", "89.5", "last angle [deg]"},
    {"angle_points", "359", "angle samples (the focus angle is added)"},
    {"db", "false", "write gain in dB (floor -40 dB)", true},
};

const std::vector<KeySpec> kCoarrayKeys{
    kSeed,
    kLayouts,
    {"kind", "difference", "difference or sum"},
};

const std::vector<KeySpec> kDoaKeys{
    kSeed,
    {"layouts", "ca(m=16)", "layout spec (exactly one)"},
    {"est", "music", "music, smooth-music, coarray-music, two-stage, omp or zf-music"},
    {"k", "1", "number of sources"},
    {"angles_deg", "", "source angles [deg]; empty spreads K sources over sin in (-0.8, 0.8)"},
    {"ranges_m", "", "source ranges [m] or inf; empty means far field"},
    {"powers", "", "source powers (linear); empty means 1"},
    {"coherent", "false", "sources share one waveform", true},
    {"snr_db", "20", "unit-power source to noise ratio [dB]"},
    {"snapshots", "200", "snapshots per trial"},
    {"trials", "10", "Monte Carlo trials"},
    {"carrier_hz", "28e9", "carrier frequency [Hz]"},
    {"grid_step", "1e-3", "largest sin-domain grid step"},
    {"subarray", "0", "smoothing sub-array length; 0 means M/2"},
    {"range_min_m", "5", "range grid start [m]"},
    {"range_max_m", "1000", "range grid end [m]"},
    {"range_points", "64", "geometric range grid samples"},
    {"reference_range_m", "inf", "two-stage stage-1 steering range [m]"},
    {"range_known", "false", "zf-music: use the true range of a single target", true},
    {"users", "0", "zf-music: interfering users dropped on a disk"},
    {"user_range_m", "200", "zf-music: user disk center range [m]"},
    {"user_angle_deg", "0", "zf-music: user disk center angle [deg]"},
    {"user_radius_m", "10", "zf-music: user disk radius [m]"},
    {"user_power_db", "0", "zf-music: user power relative to unit source power [dB]"},
    {"spectrum", "false", "also dump the trial-0 pseudo-spectrum", true},
};

const std::vector<KeySpec> kIsacKeys{
    kSeed,
    {"layouts", "ca(m=128)", "layout specs"},
    {"mode", "sensing", "sensing (NRMSE vs SNR) or rate (sum rate vs radius)"},
    {"carrier_hz", "28e9", "carrier frequency [Hz]"},
    {"k_users", "30", "users per drop"},
    {"disk_range_m", "200", "user disk center range [m]"},
    {"disk_angle_deg", "0", "user disk center angle [deg]"},
    {"disk_radius_m", "10", "user disk radius in sensing mode [m]"},
    {"radii_m", "10", "rate mode radius sweep [m]"},
    {"target_range_m", "200", "target range [m]"},
    {"target_angle_deg", "70", "target angle [deg]"},
    {"snr_db", "0", "sensing SNR sweep [dB], target echo per antenna"},
    {"rate_snr_db", "10", "per-antenna receive SNR at the disk center range [dB]"},
    {"user_to_target_db", "0", "user vs target per-antenna power in sensing [dB]"},
    {"models", "near_field", "beamforming models: near_field and/or far_field"},
    {"combiner", "mrc", "mrc or zf"},
    {"grouping", "greedy", "none, greedy or best"},
    {"grouping_threshold", "0.5", "conflict threshold on channel correlation"},
    {"snapshots", "100", "sensing snapshots per trial"},
    {"target_range_known", "true", "sensing steers at the known target range", true},
    {"grid_step", "1e-3", "largest sin-domain grid step"},
    {"trials", "1", "Monte Carlo trials per sweep point"},
    {"nrmse_threshold", "1e-3", "sensing NRMSE level reported as reached at the top SNR"},
};

struct Preset {
    std::string_view name;
    Command cmd;
    std::vector<std::pair<std::string_view, std::string_view>> values;
};

const std::vector<Preset> &presets() {
    static const std::vector<Preset> table{
        {"fig3",
         Command::pattern,
         {{"layouts", "ca(m=16) usa(m=16,eta=4) mra(m=16) moa(n=4,m=4,gamma=8) na(min=8,mou=8) cpa(mf=9,ms=8)"},
          {"grid_min", "-1"},
          {"grid_max", "1"},
          {"grid_points", "4001"}}},
        {"fig4",
         Command::focus,
         {{"layouts", "ca(m=128) usa(m=128,eta=4.1) moa(n=8,m=16,gamma=64) na(min=64,mou=64) cpa(mf=64,ms=65) "
                      "emra(n=8,m=16)"},
          {"carrier_hz", "28e9"},
          {"focus_range_m", "200"},
          {"focus_angle_deg", "0"},
          {"range_min_m", "50"},
          {"range_max_m", "10000"},
          {"range_points", "200"},
          {"angle_min_deg", "-89.5"},
          {"angle_max_deg", "89.5"},
          {"angle_points", "359"}}},
        {"fig5",
         Command::isac,
         {{"mode", "sensing"},
          {"layouts", "ca(m=128) usa(m=128,eta=4.1) na(min=64,mou=64) cpa(mf=64,ms=65)"},
          {"carrier_hz", "28e9"},
          {"k_users", "30"},
          {"disk_range_m", "200"},
          {"disk_angle_deg", "0"},
          {"disk_radius_m", "50"},
          {"target_range_m", "200"},
          {"target_angle_deg", "70"},
          {"snr_db", "-10 -5 0 5 10"},
          {"user_to_target_db", "0"},
          {"snapshots", "100"},
          {"target_range_known", "true"},
          {"grid_step", "1e-3"},
          {"trials", "100"},
          {"nrmse_threshold", "1e-3"}}},
        {"fig6",
         Command::isac,
         {{"mode", "rate"},
          {"layouts", "ca(m=128) usa(m=128,eta=4.1) moa(n=8,m=16,gamma=64) na(min=64,mou=64) cpa(mf=64,ms=65) "
                      "emra(n=8,m=16)"},
          {"carrier_hz", "28e9"},
          {"k_users", "30"},
          {"disk_range_m", "200"},
          {"disk_angle_deg", "0"},
          {"radii_m", "5 10 20 50 100 150"},
          {"rate_snr_db", "-25"},
          {"models", "near_field far_field"},
          {"combiner", "mrc"},
          {"grouping", "best"},
          {"grouping_threshold", "0.5"},
          {"trials", "50"}}},
    };
    return table;
}

bool is_layout_key(std::string_view key) {
    return std::any_of(kLayoutKeys.begin(), kLayoutKeys.end(), [&](const KeySpec &k) { return key == k.name; });
}

const KeySpec *find_key(Command cmd, std::string_view key) {
    for (const auto &k : command_keys(cmd))
        if (key == k.name) return &k;
    return nullptr;
}

std::vector<std::string> tokens(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream is{std::string(text)};
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

/// Folds arch/m/eta/... of one layer into a single `layouts` entry.
Layer fold_layout_keys(const Layer &layer) {
    Layer out;
    std::map<std::string, Setting> params;
    for (const auto &[key, setting] : layer) {
        if (is_layout_key(key))
            params[key] = setting;
        else
            out.emplace_back(key, setting);
    }
    if (params.empty()) return out;

    auto arch_it = params.find("arch");
    if (arch_it == params.end()) {
        const auto &[key, s] = *params.begin();
        throw ConfigError(s.origin + ": key '" + key + "' needs 'arch'");
    }
    const Setting arch = arch_it->second;
    params.erase(arch_it);

    auto take = [&](const char *key, const char *fallback = nullptr) -> std::string {
        auto it = params.find(key);
        if (it == params.end()) {
            if (fallback) return fallback;
            throw ConfigError(arch.origin + ": arch '" + arch.value + "' needs '" + key + "'");
        }
        std::string v = std::string(trim(it->second.value));
        params.erase(it);
        return v;
    };

    std::string spec;
    const std::string &a = arch.value;
    if (a == "ca")
        spec = "ca(m=" + take("m", "16") + ")";
    else if (a == "usa")
        spec = "usa(m=" + take("m", "16") + ",eta=" + take("eta") + ")";
    else if (a == "moa")
        spec = "moa(n=" + take("n") + ",m=" + take("m") + ",gamma=" + take("gamma") + ")";
    else if (a == "na")
        spec = "na(min=" + take("min") + ",mou=" + take("mou") + ")";
    else if (a == "cpa")
        spec = "cpa(mf=" + take("mf") + ",ms=" + take("ms") + ")";
    else if (a == "mra")
        spec = "mra(m=" + take("m", "16") + ")";
    else if (a == "emra")
        spec = "emra(n=" + take("n") + ",m=" + take("m") + ")";
    else if (a == "custom") {
        std::string list = take("positions");
        std::replace(list.begin(), list.end(), ',', ' ');
        std::string joined;
        for (const auto &t : tokens(list)) joined += (joined.empty() ? "" : ";") + t;
        spec = "custom(" + joined + ")";
    } else
        throw ConfigError(arch.origin + ": unknown architecture '" + a +
                          "' (expected ca, usa, moa, na, cpa, mra, emra or custom)");
    if (!params.empty()) {
        const auto &[key, s] = *params.begin();
        throw ConfigError(s.origin + ": key '" + key + "' does not apply to arch '" + a + "'");
    }
    out.emplace_back("layouts", Setting{spec, arch.origin});
    return out;
}

} // namespace

std::string_view command_name(Command cmd) {
    switch (cmd) {
    case Command::pattern: return "pattern";
    case Command::focus: return "focus";
    case Command::coarray: return "coarray";
    case Command::doa: return "doa";
    case Command::isac: return "isac";
    }
    return "?";
}

std::span<const KeySpec> command_keys(Command cmd) {
    switch (cmd) {
    case Command::pattern: return kPatternKeys;
    case Command::focus: return kFocusKeys;
    case Command::coarray: return kCoarrayKeys;
    case Command::doa: return kDoaKeys;
    case Command::isac: return kIsacKeys;
    }
    return {};
}

std::span<const KeySpec> layout_keys() { return kLayoutKeys; }

const Setting &Settings::at(const std::string &key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::logic_error("settings has no key '" + key + "'");
    return it->second;
}

void Settings::fail(const std::string &key, const std::string &what) const {
    const auto &s = at(key);
    throw ConfigError(s.origin + ": key '" + key + "': " + what);
}

std::string Settings::choice(const std::string &key, std::initializer_list<std::string_view> allowed) const {
    const std::string v{trim(text(key))};
    if (std::find(allowed.begin(), allowed.end(), v) != allowed.end()) return v;
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    fail(key, "expected one of " + list + ", got '" + v + "'");
}

double Settings::real(const std::string &key) const {
    try {
        return parse_double(trim(text(key)));
    } catch (const std::invalid_argument &) {
        fail(key, "expected a number, got '" + text(key) + "'");
    }
}

double Settings::real_in(const std::string &key, double lo, double hi) const {
    const double v = real(key);
    if (!(v >= lo && v <= hi)) fail(key, "must be in [" + format_number(lo) + ", " + format_number(hi) + "]");
    return v;
}

long long Settings::integer(const std::string &key, long long lo, long long hi) const {
    long long v = 0;
    try {
        v = parse_int(trim(text(key)));
    } catch (const std::invalid_argument &) {
        fail(key, "expected an integer, got '" + text(key) + "'");
    }
    if (v < lo || v > hi) fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

std::uint64_t Settings::u64(const std::string &key) const {
    const std::string v{trim(text(key))};
    std::uint64_t out = 0;
    std::istringstream is(v);
    if (v.empty() || v.front() == '-' || !(is >> out) || !is.eof())
        fail(key, "expected an unsigned 64-bit integer, got '" + v + "'");
    return out;
}

bool Settings::flag(const std::string &key) const {
    const std::string v{trim(text(key))};
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "expected true or false, got '" + v + "'");
}

std::vector<double> Settings::reals(const std::string &key) const {
    std::vector<double> out;
    std::string list = text(key);
    std::replace(list.begin(), list.end(), ',', ' ');
    for (const auto &t : tokens(list)) {
        try {
            out.push_back(parse_double(t));
        } catch (const std::invalid_argument &) {
            fail(key, "expected numbers, got '" + t + "'");
        }
    }
    return out;
}

std::vector<std::string> Settings::words(const std::string &key) const { return tokens(text(key)); }

ConfigFile parse_config(std::string_view text, const std::string &source, Command cmd) {
    ConfigFile out;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::istringstream is{std::string(text)};
    for (std::string raw; std::getline(is, raw);) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) throw ConfigError(where + ": missing key before '='");

        if (key == "output" || key == "tool_version") continue;
        if (seen.contains(key))
            throw ConfigError(where + ": key '" + key + "' already set on line " + std::to_string(seen[key]));
        seen[key] = line_no;
        if (key == "subcommand") {
            if (value != command_name(cmd))
                throw ConfigError(where + ": file is for subcommand '" + value + "', not '" +
                                  std::string(command_name(cmd)) + "'");
            continue;
        }
        if (key == "preset") {
            out.preset = value;
            continue;
        }
        if (!find_key(cmd, key) && !is_layout_key(key))
            throw ConfigError(where + ": unknown key '" + key + "' for subcommand '" + std::string(command_name(cmd)) +
                              "'");
        out.layer.emplace_back(key, Setting{value, where});
    }
    return out;
}

ConfigFile read_config_file(const std::string &path, Command cmd) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, cmd);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto &p : presets()) out.emplace_back(p.name);
    return out;
}

Layer preset_layer(std::string_view name, Command cmd) {
    for (const auto &p : presets()) {
        if (p.name != name) continue;
        if (p.cmd != cmd)
            throw ConfigError("preset '" + std::string(name) + "' belongs to subcommand '" +
                              std::string(command_name(p.cmd)) + "'");
        Layer layer;
        for (const auto &[k, v] : p.values) layer.emplace_back(std::string(k), Setting{std::string(v), "preset " + std::string(name)});
        return layer;
    }
    std::string list;
    for (const auto &n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + list + ")");
}

Settings resolve(Command cmd, std::span<const Layer> layers) {
    Settings s;
    for (const auto &k : command_keys(cmd)) s.set(k.name, Setting{k.fallback, "default"});
    for (const auto &layer : layers)
        for (const auto &[key, setting] : fold_layout_keys(layer)) {
            if (!find_key(cmd, key))
                throw ConfigError(setting.origin + ": unknown key '" + key + "' for subcommand '" +
                                  std::string(command_name(cmd)) + "'");
            s.set(key, setting);
        }
    return s;
}

std::string manifest_text(Command cmd, const Settings &settings, const std::string &preset,
                          const std::vector<std::string> &outputs) {
    std::ostringstream os;
    os << "# sparsemimo run manifest; replay with: sparsemimo " << command_name(cmd) << " --config <this file>\n";
    os << "subcommand = " << command_name(cmd) << '\n';
    os << "tool_version = " << SPARSEMIMO_VERSION << '\n';
    if (!preset.empty()) os << "preset = " << preset << '\n';
    for (const auto &[key, setting] : settings.entries()) os << key << " = " << setting.value << '\n';
    for (const auto &o : outputs) os << "output = " << o << '\n';
    return os.str();
}

} // namespace sparsemimo::cli
