// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace gabormc::experiments {

/// Exit statuses of the experiment runner (also the CLI exit codes).
enum class Status : int { Ok = 0, UsageError = 1, BoundViolation = 2 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Apply a `key.path=value` override to a parsed config. Values are parsed as
/// JSON where possible, else taken as strings.
void apply_override(nlohmann::json& cfg, const std::string& assignment);

/// Validate and run one experiment config, writing one CSV per curve plus
/// manifest.json into out_dir. With verify set, one-sided bound checks are
/// evaluated and a detected violation turns the status into BoundViolation.
Status run(const nlohmann::json& config, const std::string& out_dir, bool verify);

/// Convenience wrapper: load config from file, apply overrides, run.
/// Reports usage/config errors on stderr instead of throwing.
int run_cli(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir_override, bool verify);

}  // namespace gabormc::experiments
