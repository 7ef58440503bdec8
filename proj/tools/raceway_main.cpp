#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "raceway/experiments.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_model = 3;
constexpr int exit_io = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"raceway — microalgal raceway pond simulation and topography "
                 "optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;

    const std::vector<std::string> experiments = {
        "simulate", "optimize", "gradcheck", "sweep-nz", "sweep-N", "paddle",
        "areal"};
    const std::vector<std::string> blurbs = {
        "write flow/trajectory/state profiles for the configured shape",
        "gradient-ascent topography optimization",
        "compare the adjoint gradient against central finite differences",
        "objective convergence in the vertical discretization",
        "optimized objective for a list of Fourier truncation orders",
        "two-lap paddle-wheel optimization and flat baselines",
        "variable-volume areal-production optimization"};
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        CLI::App* sub = app.add_subcommand(experiments[i], blurbs[i]);
        sub->add_option("--config", config_path, "config file (key = value)");
        sub->add_option("--out", out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&seed_set](const std::string&) { seed_set = true; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        raceway::io::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = raceway::io::parse_config(config_path);
        if (seed_set) cfg.seed = seed;
        const std::string experiment = app.get_subcommands().front()->get_name();
        raceway::io::run_experiment(cfg, experiment, out_dir);
        return exit_ok;
    } catch (const raceway::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const raceway::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return exit_model;
    } catch (const raceway::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
}
