// SPDX-License-Identifier: Apache-2.0
//
// mimo-recip — output-SINR analysis and simulation of TDD massive MIMO
// downlink precoding under RF frontend mismatch and channel estimation errors
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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mimo_recip/config.hpp"
#include "mimo_recip/experiment.hpp"
#include "mimo_recip/validation/acceptance.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

int resolve_workers(std::optional<int> flag) {
    if (flag && *flag >= 1)
        return *flag;
    if (const char *env = std::getenv("MIMO_RECIP_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

mimo_recip::ProgressFn stderr_progress(const std::string &label) {
    return [label](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\r%s: %zu/%zu", label.c_str(), done, total);
        if (done == total)
            std::fprintf(stderr, "\n");
        std::fflush(stderr);
    };
}

} // namespace

int main(int argc, char **argv) {
    using namespace mimo_recip;

    CLI::App app{"SINR analysis and Monte Carlo simulation of TDD massive MIMO downlink "
                 "precoding under RF reciprocity mismatch and channel estimation errors"};
    app.require_subcommand(1);
    std::optional<int> workers_flag;
    app.add_option("--workers,-j", workers_flag, "worker thread count (env MIMO_RECIP_WORKERS)");

    // --- sweep ---
    auto *sweep = app.add_subcommand("sweep", "run a configured parameter sweep to CSV");
    sweep->fallthrough(); // let --workers appear after the subcommand name
    std::string config_path, out_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> trials_override;
    bool plot = false;
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--out", out_path, "output CSV path (default: config's output, else sweep.csv)");
    sweep->add_option("--seed", seed_override, "master seed override");
    sweep->add_option("--trials", trials_override, "trial count override");
    sweep->add_flag("--plot", plot, "also emit a gnuplot script next to the CSV");

    // --- figure ---
    auto *figure = app.add_subcommand("figure", "run a published-figure preset");
    figure->fallthrough();
    int figure_id = 0;
    std::string fig_out = ".";
    std::optional<std::uint64_t> fig_seed;
    std::optional<int> fig_trials;
    figure->add_option("--id", figure_id, "figure id, 2..9")->required();
    figure->add_option("--out", fig_out, "output directory (default .)");
    figure->add_option("--seed", fig_seed, "master seed (default 0x5eed2017)");
    figure->add_option("--trials", fig_trials, "trials per sweep point (default 2000)");

    // --- validate ---
    auto *validate = app.add_subcommand("validate", "run the self-validation suite");
    validate->fallthrough();
    std::string level = "fast";
    validate->add_option("--level", level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage;
    }

    const int workers = resolve_workers(workers_flag);

    try {
        if (sweep->parsed()) {
            ExperimentConfig cfg = load_config(config_path);
            if (seed_override)
                cfg.master_seed = *seed_override;
            if (trials_override) {
                if (*trials_override < 2)
                    throw config_error("--trials: must be >= 2");
                cfg.trials = *trials_override;
            }
            std::string out = !out_path.empty() ? out_path
                              : !cfg.output.empty() ? cfg.output
                                                    : std::string("sweep.csv");
            const SweepOutput res =
                run_sweep_to_files(cfg, out, plot, workers, stderr_progress("sweep"));
            for (const std::string &f : res.files)
                std::printf("wrote %s\n", f.c_str());
            return exit_ok;
        }
        if (figure->parsed()) {
            const int trials = fig_trials.value_or(2000);
            if (trials < 2)
                throw config_error("--trials: must be >= 2");
            const FigureOutput res =
                run_figure(figure_id, fig_out, trials, fig_seed.value_or(0x5eed2017ULL), workers,
                           stderr_progress("figure " + std::to_string(figure_id)));
            for (const std::string &f : res.files)
                std::printf("wrote %s\n", f.c_str());
            return exit_ok;
        }
        if (validate->parsed()) {
            validation::Options opt;
            opt.level = level == "full" ? validation::Level::full : validation::Level::fast;
            opt.workers = workers;
            const auto results = validation::run_all(opt, std::cout);
            return validation::all_passed(results) ? exit_ok : exit_runtime;
        }
    } catch (const config_error &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_usage;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }
    return exit_usage;
}
