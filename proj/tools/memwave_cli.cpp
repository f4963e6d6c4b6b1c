#include <CLI11.hpp>

#include <string>

#include "memwave/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"memwave: spectra, Ingham frame bounds and HUM boundary controls for the coupled memory wave system"};
    app.require_subcommand(1);

    memwave::RunOptions options;
    std::string config, out;
    std::uint64_t seed = 0;
    std::optional<memwave::Subcommand> chosen;

    const std::pair<const char*, const char*> commands[] = {
        {"spectrum", "characteristic roots of each mode"},
        {"modes", "per-mode coefficients of the initial data"},
        {"solution", "series solution snapshots and boundary traces"},
        {"ingham", "empirical frame ratios of the boundary traces"},
        {"control", "HUM controls for the target state, verified by the FD solver"},
        {"simulate", "finite-difference run of the initial data"},
        {"verify-all", "all of the above plus the acceptance summary"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "seed for the random trials (overrides ingham.seed)");
        sub->add_option("--threads", options.threads, "worker threads, 0 = all cores");
        sub->callback([&chosen, name = std::string(name)] { chosen = memwave::parse_subcommand(name); });
    }

    CLI11_PARSE(app, argc, argv);

    options.config = config;
    if (!out.empty()) options.out = out;
    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--seed")) options.seed = seed;
    }
    return memwave::run(*chosen, options);
}
