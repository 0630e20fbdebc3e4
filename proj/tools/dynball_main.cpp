#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dynball/config.hpp"
#include "dynball/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dynball: derivative-free Lyapunov exponent experiments for 2-D maps"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
    run_cmd->add_option("--config", config_path, "path to the key = value config document")
        ->required();
    run_cmd->add_option("--out", out_path, "report output path (overrides output.path)");
    run_cmd->add_option("--format", format, "json or csv (overrides output.format)");
    run_cmd->add_option("--seed", seed, "seed override");
    run_cmd->add_option("--threads", threads,
                        "worker threads (overrides config; default DYNBALL_THREADS or 1)");

    CLI::App* list_cmd = app.add_subcommand("list", "list the available experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list_cmd->parsed()) {
        std::fputs(dynball::list_experiments().c_str(), stdout);
        return 0;
    }

    dynball::ConfigOverrides overrides;
    overrides.seed = seed;
    overrides.output_path = out_path;
    overrides.output_format = format;
    overrides.threads = threads;

    try {
        const dynball::RunConfig cfg = dynball::load_config_file(config_path, overrides);
        return dynball::run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
