#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "cpsim/acceptance.hpp"
#include "cpsim/config.hpp"
#include "cpsim/errors.hpp"
#include "cpsim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Coarsening-model simulation and verification suite"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int threads = 1;
    std::vector<int> criteria;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", config_path, "config file");
        if (needs_config) c->required();
        cmd->add_option("--seed", seed, "override RNG seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string&) { out_set = true; });
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    };

    CLI::App* run = app.add_subcommand("run", "execute one experiment");
    add_common(run, true);
    CLI::App* sweep =
        app.add_subcommand("sweep", "Cartesian sweep over list parameters");
    add_common(sweep, true);
    CLI::App* accept =
        app.add_subcommand("accept", "run the acceptance suite");
    add_common(accept, false);
    accept->add_option("--criteria", criteria,
                       "subset of criterion indices (default all)");

    CLI11_PARSE(app, argc, argv);
    if (threads <= 0) threads = 1;

    try {
        if (accept->parsed()) {
            auto results = cpsim::acceptance::run_acceptance(criteria, threads);
            std::cout << cpsim::acceptance::format_results(results);
            for (const auto& r : results)
                if (!r.pass) return 1;
            return 0;
        }
        cpsim::RunConfig cfg = cpsim::parse_config_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out_dir = out_dir;
        if (run->parsed()) return cpsim::run_experiment(cfg, threads);
        if (cfg.has_lists()) return cpsim::run_sweep(cfg, threads);
        std::cerr << "sweep: no list-valued parameter in config\n";
        return 3;
    } catch (const cpsim::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cpsim::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const cpsim::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
