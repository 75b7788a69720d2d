#include "strata/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "strata/diagnostics.hpp"
#include "strata/linear.hpp"
#include "strata/errors.hpp"
#include "strata/norms.hpp"
#include "strata/serialization.hpp"
#include "strata/solver.hpp"
#include "strata/verification.hpp"

namespace strata {

namespace {

namespace fs = std::filesystem;

struct SolveProducts {
    SolveOutcome outcome;
    BalanceReport balance;
    SanityReport sanity;
    double solution_norm = 0.0;
    double adapted_solution_norm = 0.0;
};

SolveProducts solve_once(const RunConfig& cfg, double gamma, const State* warm) {
    const Grid grid = cfg.grid();
    const PhysicalParams params = cfg.physical_params();
    const EquilibriumProfile profile = build_profile(params, grid);
    const Forcing forcing = cfg.forcing(gamma);
    const TravelingWaveProblem tw(grid, params, profile, forcing);
    const nm::Stopping stop = cfg.stopping();

    SolveProducts prod;
    if (cfg.anchored && cfg.forcing_kind != "zero" && cfg.amplitude != 0.0) {
        const double anchor = cfg.center_x + grid.L / 2 + grid.L / 16.0;
        prod.outcome = solve_traveling_wave_anchored(tw, stop, cfg.method == "nash-moser",
                                                     anchor, warm);
    } else {
        prod.outcome = solve_traveling_wave(tw, stop, cfg.method == "nash-moser", warm);
    }
    prod.balance = power_balance(prod.outcome.solution, forcing, params, profile);
    prod.sanity = sanity_suite(prod.outcome.solution, params, profile, cfg.center_x);
    // both solution norms (plain scale and background-adapted), taken on the
    // volume-gauge-stripped state whose surface part lives in the mean-zero
    // spaces
    State stripped = prod.outcome.solution;
    {
        std::vector<double> v = stripped.eta.values();
        for (double& x : v) x -= prod.outcome.volume_shift;
        stripped.eta = SurfaceField::from_values(grid, std::move(v));
    }
    prod.solution_norm = xspace_norm(stripped, 0);
    const Background bg = make_background(prod.outcome.solution, forcing, params, profile);
    prod.adapted_solution_norm = adapted_norm(stripped, bg, 0);
    return prod;
}

void write_manifest(const std::string& path, const RunConfig& cfg, double gamma,
                    std::uint64_t seed, const SolveProducts& prod) {
    std::ofstream out(path);
    out.precision(17);
    out << "# run manifest\n" << describe(cfg);
    out << "gamma = " << gamma << "\n";
    out << "seed = " << seed << "\n";
    out << "converged = " << (prod.outcome.report.converged ? "true" : "false") << "\n";
    out << "stop_reason = " << prod.outcome.report.stop_reason << "\n";
    out << "residual_y0 = " << prod.outcome.residual_norm << "\n";
    out << "solution_norm_x0 = " << prod.solution_norm << "\n";
    out << "solution_norm_adapted = " << prod.adapted_solution_norm << "\n";
    out << "volume_shift = " << prod.outcome.volume_shift << "\n";
    out << "dissipation = " << prod.balance.dissipation << "\n";
    out << "power_total = " << prod.balance.rhs_total << "\n";
    out << "balance_imbalance = " << prod.balance.imbalance << "\n";
    out << "vacuum_margin_low = " << prod.sanity.vacuum_margin_low << "\n";
    out << "vacuum_margin_high = " << prod.sanity.vacuum_margin_high << "\n";
    out << "min_jacobian = " << prod.sanity.min_jacobian << "\n";
    out << "korn_ratio = " << prod.sanity.korn_ratio << "\n";
    out << "decay_ratio = " << prod.sanity.decay_ratio << "\n";
    out << "div_compat_ratio = " << prod.sanity.div_compat_ratio << "\n";
    out << "steps = " << prod.outcome.report.steps << "\n";
    for (const auto& rec : prod.outcome.report.history)
        out << "step " << rec.j << " residual " << rec.residual << " xi " << rec.xi << "\n";
    for (std::size_t i = 0; i < prod.outcome.report.h_slopes.size(); ++i)
        out << "h_slope_s" << prod.outcome.report.slope_indices[i] << " = "
            << prod.outcome.report.h_slopes[i] << "\n";
}

void write_products(const fs::path& dir, const RunConfig& cfg, double gamma, std::uint64_t seed,
                    const SolveProducts& prod) {
    fs::create_directories(dir);
    write_manifest((dir / "manifest.txt").string(), cfg, gamma, seed, prod);
    Checkpoint ckpt;
    ckpt.grid = cfg.grid();
    ckpt.state = prod.outcome.solution;
    ckpt.forcing = cfg.forcing(gamma).descriptor;
    ckpt.gamma = gamma;
    ckpt.volume_shift = prod.outcome.volume_shift;
    ckpt.profile_hash = profile_fingerprint(cfg.physical_params());
    ckpt.provenance = cfg.method + " steps=" + std::to_string(prod.outcome.report.steps);
    save_checkpoint((dir / "checkpoint.bin").string(), ckpt);
    write_surface_csv((dir / "surface.csv").string(), prod.outcome.solution.eta);
}

State load_resume(const RunConfig& cfg, const std::string& path) {
    const Checkpoint ckpt = load_checkpoint(path);
    if (!(ckpt.grid == cfg.grid()))
        throw CheckpointError("resume: checkpoint grid does not match the configuration");
    if (ckpt.profile_hash != profile_fingerprint(cfg.physical_params()))
        throw CheckpointError("resume: checkpoint was produced with different physics");
    return ckpt.state;
}

}  // namespace

int run_solve(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
              const std::string& resume_path) {
    const double gamma = cfg.gammas.front();
    State warm(cfg.grid());
    bool have_warm = false;
    if (!resume_path.empty()) {
        warm = load_resume(cfg, resume_path);
        have_warm = true;
    }
    const SolveProducts prod = solve_once(cfg, gamma, have_warm ? &warm : nullptr);
    write_products(out_dir, cfg, gamma, seed, prod);
    std::cout << "gamma " << gamma << ": residual " << prod.outcome.residual_norm << " after "
              << prod.outcome.report.steps << " steps ("
              << (prod.outcome.report.converged ? "converged" : prod.outcome.report.stop_reason)
              << ")\n";
    return prod.outcome.report.converged ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed) {
    const fs::path root(out_dir);
    fs::create_directories(root);
    std::vector<SurfaceField> profiles;
    std::vector<double> speeds;
    State warm(cfg.grid());
    bool have_warm = false;
    bool all_ok = true;

    std::ofstream summary(root / "sweep.txt");
    summary.precision(17);
    for (double gamma : cfg.gammas) {
        std::ostringstream name;
        name << "gamma-" << gamma;
        try {
            const SolveProducts prod = solve_once(cfg, gamma, have_warm ? &warm : nullptr);
            write_products(root / name.str(), cfg, gamma, seed, prod);
            summary << "gamma " << gamma << " converged "
                    << (prod.outcome.report.converged ? 1 : 0) << " steps "
                    << prod.outcome.report.steps << " residual " << prod.outcome.residual_norm;
            if (have_warm) {
                // cold rerun for the continuation bookkeeping
                const SolveProducts cold = solve_once(cfg, gamma, nullptr);
                summary << " cold_steps " << cold.outcome.report.steps;
            }
            summary << "\n";
            std::cout << "gamma " << gamma << ": residual " << prod.outcome.residual_norm
                      << " in " << prod.outcome.report.steps << " steps\n";
            all_ok = all_ok && prod.outcome.report.converged;
            profiles.push_back(prod.outcome.solution.eta);
            speeds.push_back(gamma);
            warm = prod.outcome.solution;
            have_warm = true;
        } catch (const std::exception& e) {
            // isolate per-speed failures and keep sweeping
            summary << "gamma " << gamma << " failed: " << e.what() << "\n";
            std::cout << "gamma " << gamma << " failed: " << e.what() << "\n";
            all_ok = false;
        }
    }

    if (!profiles.empty()) {
        std::ofstream csv(root / "profiles.csv");
        csv.precision(17);
        csv << "x";
        for (double gamma : speeds) csv << ",eta_gamma_" << gamma;
        csv << "\n";
        const Grid grid = cfg.grid();
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            csv << grid.x(ix);
            for (const auto& eta : profiles) csv << "," << eta.value(ix);
            csv << "\n";
        }
    }
    return all_ok ? 0 : 1;
}

int run_verify(const std::string& family, std::uint64_t seed) {
    std::vector<CheckResult> results;
    if (family == "identities")
        results = verify_identities(seed);
    else if (family == "linear")
        results = verify_linear(seed);
    else if (family == "solve")
        results = verify_solves(seed);
    else if (family == "all")
        results = verify_all(seed);
    else
        throw ConfigError("verify: unknown family '" + family + "'");

    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": "
                  << r.detail << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

int run_inspect(const std::string& checkpoint_path, const RunConfig* cfg) {
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    std::cout.precision(17);
    std::cout << "grid: L " << ckpt.grid.L << ", nx " << ckpt.grid.nx << ", nz " << ckpt.grid.nz
              << ", depth " << ckpt.grid.depth << "\n"
              << "forcing: " << ckpt.forcing.kind << " center (" << ckpt.forcing.cx << ", "
              << ckpt.forcing.cy << ") width " << ckpt.forcing.width << " amplitude "
              << ckpt.forcing.amplitude << "\n"
              << "gamma: " << ckpt.gamma << "\n"
              << "volume shift: " << ckpt.volume_shift << "\n"
              << "provenance: " << ckpt.provenance << "\n";
    if (cfg != nullptr) {
        if (ckpt.profile_hash != profile_fingerprint(cfg->physical_params()))
            throw CheckpointError("inspect: checkpoint physics differs from the configuration");
        const PhysicalParams params = cfg->physical_params();
        const EquilibriumProfile profile = build_profile(params, ckpt.grid);
        const Forcing forcing = cfg->forcing(ckpt.gamma);
        const Residual r = residual(ckpt.state, forcing, params, profile);
        std::cout << "residual_y0: " << yspace_norm(r, 0) << "\n";
    }
    return 0;
}

}  // namespace strata
