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

#include "commands.hpp"
#include "settings.hpp"

#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

namespace sparsemimo::cli {

namespace {

constexpr std::array kCommands{Command::pattern, Command::focus, Command::coarray, Command::doa, Command::isac};

std::string flag_name(std::string_view key) {
    std::string out = "--";
    for (char c : key) out += c == '_' ? '-' : c;
    return out;
}

std::string_view command_help(Command cmd) {
    switch (cmd) {
    case Command::pattern: return "far-field beam patterns (one CSV per layout)";
    case Command::focus: return "near-field focusing gain over range x angle (one CSV per layout)";
    case Command::coarray: return "difference or sum co-array weights, holes and DoF";
    case Command::doa: return "Monte Carlo direction finding with a chosen estimator";
    case Command::isac: return "multi-user ISAC sweeps: sensing NRMSE or uplink sum rate";
    }
    return "";
}

struct Registered {
    std::string key;
    std::string value;
    CLI::Option *option = nullptr;
};

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
    os.close();
    if (!os) throw std::runtime_error("cannot write " + path.string());
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"sparsemimo: sparse array geometry, beam pattern, DOA and ISAC experiments", "sparsemimo"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string seed_text;
    int jobs = 1;
    std::string out_dir = ".";
    std::string preset;
    auto *seed_opt = app.add_option("--seed", seed_text, "master seed (unsigned 64-bit)");
    app.add_option("--config", config_path, "flat key = value config file (a manifest replays a run)");
    app.add_option("--jobs", jobs, "worker threads; never changes output bytes")->check(CLI::Range(1, 1024));
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--preset", preset, "named parameter set: fig3 (pattern), fig4 (focus), fig5/fig6 (isac)");

    // One std::string per key keeps flag values textual until resolution.
    std::map<Command, std::vector<Registered>> registered;
    std::map<CLI::App *, Command> sub_of;
    for (Command cmd : kCommands) {
        auto *sub = app.add_subcommand(std::string(command_name(cmd)), std::string(command_help(cmd)));
        sub_of[sub] = cmd;
        auto &regs = registered[cmd];
        regs.reserve(command_keys(cmd).size() + layout_keys().size());
        auto add = [&](const KeySpec &k) {
            if (std::string_view(k.name) == "seed") return;
            regs.push_back({k.name, {}, nullptr});
            auto &r = regs.back();
            std::string help = k.help;
            if (*k.fallback) help += " [default: " + std::string(k.fallback) + "]";
            if (k.boolean)
                r.option = sub->add_flag(flag_name(k.name) + "{true}", r.value, help);
            else
                r.option = sub->add_option(flag_name(k.name), r.value, help)->allow_extra_args(false);
        };
        for (const auto &k : layout_keys()) add(k);
        for (const auto &k : command_keys(cmd)) add(k);
    }

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp &) {
        const auto *active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        out << active->help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    CLI::App *sub = app.get_subcommands().front();
    const Command cmd = sub_of.at(sub);
    try {
        std::vector<Layer> layers;
        ConfigFile file;
        if (!config_path.empty()) file = read_config_file(config_path, cmd);
        const std::string chosen_preset = !preset.empty() ? preset : file.preset;
        if (!chosen_preset.empty()) layers.push_back(preset_layer(chosen_preset, cmd));
        layers.push_back(file.layer);
        Layer flags;
        if (seed_opt->count() > 0) flags.emplace_back("seed", Setting{seed_text, "--seed"});
        for (const auto &r : registered.at(cmd))
            if (r.option->count() > 0) {
                if (r.value.find('\n') != std::string::npos)
                    throw ConfigError(flag_name(r.key) + ": value must be a single line");
                flags.emplace_back(r.key, Setting{r.value, flag_name(r.key)});
            }
        layers.push_back(std::move(flags));
        const Settings settings = resolve(cmd, layers);
        (void)settings.u64("seed");

        CommandResult result = run_command(cmd, settings, jobs);

        std::vector<std::string> names;
        for (const auto &f : result.files) names.push_back(f.name);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        for (const auto &f : result.files) write_file(dir / f.name, f.content);
        write_file(dir / "manifest.txt", manifest_text(cmd, settings, chosen_preset, names));

        out << result.summary;
        out << "wrote " << names.size() << " file(s) and manifest.txt to " << dir.string() << '\n';
        return 0;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n\n" << sub->help();
        return 1;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << command_name(cmd) << ": " << e.what() << '\n';
        return 1;
    }
}

} // namespace sparsemimo::cli
