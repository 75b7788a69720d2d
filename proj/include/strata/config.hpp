#pragma once

#include <string>
#include <vector>

#include "strata/equilibrium.hpp"
#include "strata/forcing.hpp"
#include "strata/grid.hpp"
#include "strata/nashmoser.hpp"

namespace strata {

// Run configuration, loaded from a sectioned JSON file; every numeric field
// is validated against the module preconditions before dispatch.
struct RunConfig {
    // physics
    int n = 2;
    double depth = 1.0;
    double gravity = 1.0;
    double surface_tension = 1.0;
    double external_pressure = 1.0;
    std::string pressure_kind = "polytropic";
    double K = 1.0;
    double alpha = 1.0;
    double mu = 1.0;
    double lambda = 1.0;

    // grid
    double L = 16.0;
    std::size_t nx = 64;
    std::size_t nz = 24;

    // forcing
    std::string forcing_kind = "gaussian-pressure";
    double center_x = 8.0;
    double center_y = 1.0;
    double width = 1.0;
    double amplitude = 1e-3;
    std::vector<double> gammas = {1.0};

    // solver
    std::string method = "newton";  // newton | nash-moser
    int monitor_index = 0;
    double residual_tol = 1e-10;
    int max_steps = 20;
    int reg_m = 0;
    double reg_N = 0.0;
    double reg_tau = 1.0;
    bool anchored = true;

    std::string out_dir = "out";

    PhysicalParams physical_params() const;
    Grid grid() const;
    Forcing forcing(double gamma) const;
    nm::Stopping stopping() const;
};

RunConfig load_config(const std::string& path);   // throws ConfigError
void validate(const RunConfig& cfg);              // throws ConfigError
std::string describe(const RunConfig& cfg);       // manifest block

}  // namespace strata
