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

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sparsemimo::cli {

/// Bad key, bad value or bad file; the message names where the value came from.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A required input is missing entirely; the caller prints usage text.
class UsageError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

enum class Command { pattern, focus, coarray, doa, isac };

std::string_view command_name(Command cmd);

struct KeySpec {
    const char *name;
    const char *fallback; ///< default value text
    const char *help;
    bool boolean = false;
};

/// Keys stored in the resolved settings of a command (layout flags excluded).
std::span<const KeySpec> command_keys(Command cmd);

/// arch, m, eta, ...: folded into `layouts` within each layer.
std::span<const KeySpec> layout_keys();

struct Setting {
    std::string value;
    std::string origin; ///< "default", "preset fig5", "run.cfg:12", "--trials"
};

/// key=value pairs from one source, in the order they appeared.
using Layer = std::vector<std::pair<std::string, Setting>>;

class Settings {
  public:
    void set(const std::string &key, Setting setting) { entries_[key] = std::move(setting); }
    const Setting &at(const std::string &key) const;
    const std::map<std::string, Setting> &entries() const { return entries_; }

    std::string text(const std::string &key) const { return at(key).value; }
    /// text(key) checked against a fixed set of words.
    std::string choice(const std::string &key, std::initializer_list<std::string_view> allowed) const;
    double real(const std::string &key) const;
    double real_in(const std::string &key, double lo, double hi) const;
    long long integer(const std::string &key, long long lo, long long hi) const;
    std::uint64_t u64(const std::string &key) const;
    bool flag(const std::string &key) const;
    std::vector<double> reals(const std::string &key) const;
    std::vector<std::string> words(const std::string &key) const;

    /// Error message prefixed with the key's origin.
    [[noreturn]] void fail(const std::string &key, const std::string &what) const;

  private:
    std::map<std::string, Setting> entries_;
};

struct ConfigFile {
    Layer layer;
    std::string preset; ///< empty unless the file names one
};

/// Flat "key = value" text; '#' starts a comment line. Meta keys written by
/// manifests (subcommand, tool_version, output) are checked or skipped.
ConfigFile read_config_file(const std::string &path, Command cmd);
ConfigFile parse_config(std::string_view text, const std::string &source, Command cmd);

std::vector<std::string> preset_names();
Layer preset_layer(std::string_view name, Command cmd);

/// Defaults overlaid by each layer in turn (later layers win).
Settings resolve(Command cmd, std::span<const Layer> layers);

/// Replayable config text recording the resolved run.
std::string manifest_text(Command cmd, const Settings &settings, const std::string &preset,
                          const std::vector<std::string> &outputs);

} // namespace sparsemimo::cli
