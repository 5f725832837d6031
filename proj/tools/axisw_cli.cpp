// Command-line front end: axisw <simulate|sweep|threshold|riesz-survey> --config PATH ...

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "axisw/axisw.h"

int main(int argc, char** argv) {
    CLI::App app{"Axisymmetric swirl solver and diagnostics"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::string resume_path;
    bool deterministic = false;
    std::uint64_t seed = 0;

    struct Sub {
        const char* name;
        const char* help;
        axisw_mode mode;
    };
    const Sub subs[] = {
        {"simulate", "Run one simulation and write timeseries.csv and checkpoints", AXISW_MODE_SIMULATE},
        {"sweep", "Run one simulation per epsilon and write sweep.csv", AXISW_MODE_SWEEP},
        {"threshold", "Print the largest admissible epsilon for the configured data", AXISW_MODE_THRESHOLD},
        {"riesz-survey", "Sample the weighted Poisson ratio on two resolutions", AXISW_MODE_RIESZ_SURVEY},
    };

    axisw_mode mode = AXISW_MODE_FROM_CONFIG;
    CLI::Option* seed_opt = nullptr;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config, "YAML experiment file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
        sub->add_flag("--deterministic", deterministic, "Single-threaded, reproducible execution");
        sub->add_option("--resume", resume_path, "Continue from a checkpoint file")->check(CLI::ExistingFile);
        CLI::Option* opt = sub->add_option("--seed", seed, "Seed for the riesz survey");
        sub->callback([&mode, &seed_opt, opt, m = s.mode] {
            mode = m;
            seed_opt = opt;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(AXISW_ERR_CONFIG);
    }

    axisw_run_options options;
    axisw_run_options_default(&options);
    options.mode = mode;
    options.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    options.resume_path = resume_path.empty() ? nullptr : resume_path.c_str();
    options.deterministic = deterministic ? 1 : 0;
    if (seed_opt && seed_opt->count() > 0) {
        options.has_seed = 1;
        options.seed = seed;
    }

    const axisw_status status = axisw_run_experiment(config.c_str(), &options);
    if (status == AXISW_ERR_INVALID_ARGUMENT) std::cerr << "error: " << axisw_last_error() << '\n';
    return static_cast<int>(status);
}
