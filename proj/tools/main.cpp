#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "strata/driver.hpp"
#include "strata/errors.hpp"
#include "strata/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

void apply_thread_env() {
    if (const char* env = std::getenv("STRATA_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) {
#ifdef _OPENMP
            omp_set_num_threads(n);
#endif
            if (n == 1) strata::kernels::set_mode(strata::kernels::Mode::serial);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"pseudo-spectral traveling-wave solver for the viscous compressible slab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, resume_path, family = "all";
    std::uint64_t seed = 1;

    auto* solve = app.add_subcommand("solve", "solve at a single wave speed");
    solve->add_option("--config", config_path, "run configuration (json)")->required();
    solve->add_option("--out", out_dir, "output directory override");
    solve->add_option("--resume", resume_path, "checkpoint to warm-start from");
    solve->add_option("--seed", seed, "rng seed recorded in the manifest");

    auto* sweep = app.add_subcommand("sweep", "continuation over the configured wave speeds");
    sweep->add_option("--config", config_path, "run configuration (json)")->required();
    sweep->add_option("--out", out_dir, "output directory override");
    sweep->add_option("--seed", seed, "rng seed recorded in the manifests");

    auto* verify = app.add_subcommand("verify", "run the verification checks");
    verify->add_option("family", family, "identities | linear | solve | all");
    verify->add_option("--seed", seed, "rng seed for the randomized checks");

    std::string ckpt_path;
    auto* inspect = app.add_subcommand("inspect", "describe a checkpoint");
    inspect->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
    inspect->add_option("--config", config_path, "configuration for residual recomputation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const strata::RunConfig cfg = strata::load_config(config_path);
            return strata::run_solve(cfg, out_dir.empty() ? cfg.out_dir : out_dir, seed,
                                     resume_path);
        }
        if (sweep->parsed()) {
            const strata::RunConfig cfg = strata::load_config(config_path);
            return strata::run_sweep(cfg, out_dir.empty() ? cfg.out_dir : out_dir, seed);
        }
        if (verify->parsed()) return strata::run_verify(family, seed);
        if (inspect->parsed()) {
            if (config_path.empty()) return strata::run_inspect(ckpt_path, nullptr);
            const strata::RunConfig cfg = strata::load_config(config_path);
            return strata::run_inspect(ckpt_path, &cfg);
        }
    } catch (const strata::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const strata::CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
