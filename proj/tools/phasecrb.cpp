// Command-line front end: phasecrb <command> [--config PATH] [--out PATH] [--format F] [--seed N] [--threads N]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phasecrb/cli.hpp"
#include "phasecrb/error.hpp"

int main(int argc, char** argv)
{
    using namespace phasecrb;

    CLI::App app{"Quantum Cramer-Rao bounds for stochastic optical phase estimation"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, out, format;
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration (a manifest from an earlier run works too)");
    auto* out_opt = app.add_option("--out", out, "Output file; stdout if omitted");
    auto* format_opt = app.add_option("--format", format, "json, csv or svg")
                           ->check(CLI::IsMember({"json", "csv", "svg"}));
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads (fallback: PHASECRB_THREADS)")
                            ->check(CLI::PositiveNumber);

    for (const char* name : {"bound", "surface", "optimize", "scaling", "simulate", "validate"})
        app.add_subcommand(name, std::string("Run the ") + name + " command");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw ConfigError("--config", "cannot read " + config_path);
            std::stringstream text;
            text << in.rdbuf();
            config = parse_config_text(text.str());
        }
        if (!app.get_subcommands().empty())
            config.command = app.get_subcommands().front()->get_name();
        if (*out_opt)
            config.out = out;
        if (*format_opt)
            config.format = format;
        if (*seed_opt)
            config.seed = seed;
        if (*threads_opt)
            config.threads = threads;
    } catch (const std::exception& e) {
        std::cout << error_json(e);
        return 1;
    }
    return run(config, std::cout, std::cerr);
}
