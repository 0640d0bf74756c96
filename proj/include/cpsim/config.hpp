#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsim/profiles.hpp"

namespace cpsim {

// Validated run configuration. List-valued solver/bridge parameters are only
// legal for sweeps; run_experiment requires scalars.
struct ProfileSpec {
    std::string kind;  // self_similar | gaussian | tabulated | delta
    double beta = 1.0;
    double length = 1.0;
    std::vector<double> x_nodes, v_values;
    double x_inf = std::numeric_limits<double>::infinity();
    std::string csv_path;

    Profile build() const;  // throws for kind == "delta"
};

struct RunConfig {
    std::string model;  // cp|inviscid|diffusive|viscous|bridge|study
    ProfileSpec profile;

    // solver parameters (lists allowed for sweep)
    std::vector<double> epsilon{0.0};
    std::vector<double> dx{1e-3};
    std::vector<double> nu{1.0};
    double dt = 1e-3;
    double t_end = 1.0;
    double x_max = 32.0;
    std::vector<double> output_times;
    bool predictor_corrector = false;

    // bridge parameters
    double bridge_T = 1.0;
    double bridge_x = 1.0;
    double bridge_y = 1.0;
    double bridge_lambda = 1.0;  // boundary point in units of eps
    bool bridge_use_lambda = false;
    std::vector<double> bridge_a{0.0};
    std::size_t n_paths = 100000;
    std::size_t n_steps = 1000;
    std::string bridge_method = "kernel_factor";

    // study parameters
    std::vector<double> eps_list;
    double study_T = 1.0;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    bool has_lists() const;
};

// Strict JSON parse: unknown keys anywhere are a config_error.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace cpsim
