#include "strata/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {

using nlohmann::json;

PhysicalParams RunConfig::physical_params() const {
    PhysicalParams p;
    p.n = n;
    p.depth = depth;
    p.gravity = gravity;
    p.surface_tension = surface_tension;
    p.external_pressure = external_pressure;
    p.pressure = PressureLaw::make_polytropic(K, alpha);
    p.viscosity = ViscosityLaw::constant(mu, lambda);
    return p;
}

Grid RunConfig::grid() const { return Grid(L, nx, nz, depth, n); }

Forcing RunConfig::forcing(double gamma) const {
    if (forcing_kind == "zero" || amplitude == 0.0) return Forcing::zero(gamma);
    return Forcing::gaussian_pressure(gamma, L, center_x, center_y, width, amplitude);
}

nm::Stopping RunConfig::stopping() const {
    nm::Stopping stop;
    stop.max_steps = max_steps;
    stop.residual_tol = residual_tol;
    stop.monitor_index = monitor_index;
    return stop;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (j.contains("physics")) {
            const auto& p = j["physics"];
            cfg.n = p.value("n", cfg.n);
            cfg.depth = p.value("depth", cfg.depth);
            cfg.gravity = p.value("gravity", cfg.gravity);
            cfg.surface_tension = p.value("surface_tension", cfg.surface_tension);
            if (p.contains("pressure")) {
                const auto& pr = p["pressure"];
                cfg.pressure_kind = pr.value("kind", cfg.pressure_kind);
                cfg.K = pr.value("K", cfg.K);
                cfg.alpha = pr.value("alpha", cfg.alpha);
                cfg.external_pressure = pr.value("P_ext", cfg.external_pressure);
            }
            if (p.contains("viscosity")) {
                cfg.mu = p["viscosity"].value("mu", cfg.mu);
                cfg.lambda = p["viscosity"].value("lambda", cfg.lambda);
            }
        }
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            cfg.L = g.value("L", cfg.L);
            cfg.nx = g.value("nx", cfg.nx);
            cfg.nz = g.value("nz", cfg.nz);
        }
        if (j.contains("forcing")) {
            const auto& f = j["forcing"];
            cfg.forcing_kind = f.value("kind", cfg.forcing_kind);
            if (f.contains("center")) {
                cfg.center_x = f["center"].at(0).get<double>();
                cfg.center_y = f["center"].at(1).get<double>();
            }
            cfg.width = f.value("width", cfg.width);
            cfg.amplitude = f.value("amplitude", cfg.amplitude);
            if (f.contains("gamma_list"))
                cfg.gammas = f["gamma_list"].get<std::vector<double>>();
            else if (f.contains("gamma"))
                cfg.gammas = {f["gamma"].get<double>()};
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            cfg.method = s.value("method", cfg.method);
            cfg.monitor_index = s.value("monitor_index", cfg.monitor_index);
            cfg.residual_tol = s.value("residual_tol", cfg.residual_tol);
            cfg.max_steps = s.value("max_steps", cfg.max_steps);
            cfg.anchored = s.value("anchored", cfg.anchored);
            if (s.contains("regularization")) {
                cfg.reg_m = s["regularization"].value("m", cfg.reg_m);
                cfg.reg_N = s["regularization"].value("N", cfg.reg_N);
                cfg.reg_tau = s["regularization"].value("tau", cfg.reg_tau);
            }
        }
        if (j.contains("output")) cfg.out_dir = j["output"].value("dir", cfg.out_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
    if (cfg.n != 2) fail("the solve path requires n = 2");
    if (cfg.depth <= 0 || cfg.gravity <= 0) fail("depth and gravity must be positive");
    if (cfg.surface_tension < 0) fail("surface tension must be nonnegative");
    if (cfg.pressure_kind != "polytropic") fail("unknown pressure law kind");
    if (cfg.K <= 0 || cfg.alpha < 1) fail("polytropic law needs K > 0 and alpha >= 1");
    if (cfg.mu <= 0) fail("shear viscosity must be positive");
    if (cfg.n == 2 && cfg.lambda <= 0) fail("bulk viscosity must be positive when n = 2");
    if (cfg.L <= 0) fail("period must be positive");
    if (cfg.nx % 2 != 0 || cfg.nx < 8) fail("nx must be even and >= 8");
    if (cfg.nz < 8) fail("nz must be >= 8");
    if (cfg.forcing_kind != "gaussian-pressure" && cfg.forcing_kind != "zero")
        fail("unknown forcing kind");
    if (cfg.width <= 0) fail("forcing width must be positive");
    if (cfg.gammas.empty()) fail("at least one wave speed is required");
    for (double g : cfg.gammas)
        if (g <= 0) fail("wave speeds must be positive");
    if (cfg.method != "newton" && cfg.method != "nash-moser") fail("unknown solver method");
    if (cfg.residual_tol <= 0) fail("residual tolerance must be positive");
    if (cfg.max_steps < 1) fail("max_steps must be at least 1");
    if (cfg.reg_m != 0 && cfg.reg_m < 2) fail("regularization order m must be 0 or >= 2");
    if (cfg.reg_m >= 2 && cfg.reg_N <= 0) fail("regularization needs N > 0");
    if (cfg.reg_m >= 2 && 2 * static_cast<std::size_t>(cfg.reg_m) >= cfg.nz)
        fail("vertical grid too coarse for the requested regularization");
}

std::string describe(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "n = " << cfg.n << "\n"
        << "depth = " << cfg.depth << "\n"
        << "gravity = " << cfg.gravity << "\n"
        << "surface_tension = " << cfg.surface_tension << "\n"
        << "pressure = polytropic K=" << cfg.K << " alpha=" << cfg.alpha
        << " P_ext=" << cfg.external_pressure << "\n"
        << "viscosity = mu " << cfg.mu << ", lambda " << cfg.lambda << "\n"
        << "grid = L " << cfg.L << ", nx " << cfg.nx << ", nz " << cfg.nz << "\n"
        << "forcing = " << cfg.forcing_kind << " center (" << cfg.center_x << ", "
        << cfg.center_y << ") width " << cfg.width << " amplitude " << cfg.amplitude << "\n"
        << "method = " << cfg.method << "\n"
        << "monitor_index = " << cfg.monitor_index << "\n"
        << "residual_tol = " << cfg.residual_tol << "\n"
        << "max_steps = " << cfg.max_steps << "\n"
        << "anchored = " << (cfg.anchored ? "true" : "false") << "\n";
    if (cfg.reg_m >= 2)
        out << "regularization = m " << cfg.reg_m << ", N " << cfg.reg_N << ", tau "
            << cfg.reg_tau << "\n";
    return out.str();
}

}  // namespace strata
