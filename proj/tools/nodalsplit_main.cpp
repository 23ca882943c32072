#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nodalsplit/config.hpp"
#include "nodalsplit/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nodal-set analysis of a perturbed rectangle with a degenerate eigenvalue"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 0;
    for (const char* name : {"analyze", "solve", "sweep", "figures", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--jobs", jobs, "worker count (overrides config)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        nodalsplit::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = nodalsplit::parse_config(config_path);
        } else {
            cfg = nodalsplit::parse_config_text("{}", "<default>");
        }
        cfg.command = app.get_subcommands().front()->get_name();
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (jobs > 0) cfg.jobs = jobs;
        return nodalsplit::run_command(cfg, std::cout);
    } catch (const nodalsplit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
