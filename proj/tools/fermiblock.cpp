#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fermiblock/config.hpp"
#include "fermiblock/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fermiblock: free-fermion block-encoding experiment driver"};

    std::string config_path;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;

    app.add_option("config", config_path, "experiment config file")->required();
    app.add_option("--output-dir", output_dir, "directory for CSV/report artifacts");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    std::ifstream f(config_path);
    if (!f) {
        std::cerr << "fermiblock: cannot open " << config_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();

    try {
        const auto cfg = fermiblock::parse_config(ss.str());
        return fermiblock::run_experiment(
            cfg, output_dir, seed_set ? std::optional(seed) : std::nullopt, jobs);
    } catch (const fermiblock::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fermiblock: " << e.what() << "\n";
        return 1;
    }
}
