// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gabormc/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gabormc experiment runner: bounds, ambiguity surfaces and Monte Carlo "
                 "verification for pulse-shaped multicarrier transmission"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool verify = false;
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--set", overrides, "override a config key, e.g. --set seed=7 or "
                                        "--set parameters.snr_db=[10,20]");
    run->add_option("--out", out_dir, "output directory (overrides config output_dir)");
    run->add_flag("--verify", verify, "check one-sided bound/prediction consistency; "
                                      "exit 2 on a detected violation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1
    }
    return gabormc::experiments::run_cli(config_path, overrides, out_dir, verify);
}
