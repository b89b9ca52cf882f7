#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hawkeslab/config.hpp"
#include "hawkeslab/errors.hpp"
#include "hawkeslab/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitModule = 3;

int run_command(const std::string& path, std::optional<std::uint64_t> seed,
                std::optional<std::uint64_t> replications, std::optional<std::string> out) {
    hawkeslab::ExperimentConfig cfg = hawkeslab::load_config_file(path);
    if (seed) cfg.seed = *seed;
    if (replications) cfg.replications = *replications;
    if (out) cfg.out = *out;
    const auto summary = hawkeslab::run_experiment(cfg);
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int oracle_command(const std::string& path, std::optional<std::string> out) {
    hawkeslab::ExperimentConfig cfg = hawkeslab::load_config_file(path);
    if (cfg.kind != "grid_oracle")
        throw hawkeslab::ConfigError("oracle expects a config with kind = grid_oracle");
    if (out) cfg.out = *out;
    const auto summary = hawkeslab::run_experiment(cfg);
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int list_command() {
    for (const auto& kind : hawkeslab::experiment_kinds())
        std::printf("%-16s %s\n", kind.name.c_str(), kind.description.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hawkeslab experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replications;
    std::optional<std::string> out_dir;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--seed", seed, "override the seed");
    run->add_option("--replications", replications, "override the replication count");
    run->add_option("--out", out_dir, "override the output directory");

    CLI::App* oracle = app.add_subcommand("oracle", "run a grid-oracle config");
    oracle->add_option("config", config_path, "config file (kind = grid_oracle)")->required();
    oracle->add_option("--out", out_dir, "override the output directory");

    app.add_subcommand("list", "enumerate experiment kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return run_command(config_path, seed, replications, out_dir);
        if (oracle->parsed()) return oracle_command(config_path, out_dir);
        return list_command();
    } catch (const hawkeslab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModule;
    }
}
