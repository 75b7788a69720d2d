#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "strata/config.hpp"
#include "strata/driver.hpp"
#include "strata/errors.hpp"
#include "strata/norms.hpp"
#include "strata/operators.hpp"
#include "strata/serialization.hpp"

using namespace strata;

namespace {

const char* kConfigJson = R"({
  "physics": {
    "n": 2, "depth": 1.0, "gravity": 1.0, "surface_tension": 1.0,
    "pressure": {"kind": "polytropic", "K": 1.0, "alpha": 1.0, "P_ext": 1.0},
    "viscosity": {"mu": 1.0, "lambda": 1.0}
  },
  "grid": {"L": 16.0, "nx": 32, "nz": 16},
  "forcing": {"kind": "gaussian-pressure", "center": [8.0, 1.0], "width": 1.0,
              "amplitude": 1e-3, "gamma": 1.0},
  "solver": {"method": "newton", "residual_tol": 1e-10, "max_steps": 20},
  "output": {"dir": "out"}
})";

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("config: load, defaults, and validation failures") {
    const std::string path = temp_path("strata_cfg.json");
    {
        std::ofstream out(path);
        out << kConfigJson;
    }
    const RunConfig cfg = load_config(path);
    CHECK(cfg.nx == 32);
    CHECK(cfg.gammas.size() == 1);
    CHECK(cfg.method == "newton");
    CHECK(cfg.amplitude == 1e-3);

    RunConfig bad = cfg;
    bad.nx = 31;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = cfg;
    bad.gammas = {0.0};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = cfg;
    bad.reg_m = 1;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: round trip reproduces the residual bit-for-bit") {
    const Grid g(16.0, 32, 16, 1.0);
    PhysicalParams p;
    p.surface_tension = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, 1.0);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    const auto prof = build_profile(p, g);
    const Forcing forcing = Forcing::gaussian_pressure(1.0, g.L, 8.0, 1.0, 1.0, 1e-3);

    State w(g);
    w.q = random_slab(g, 3, 1e-3, 5);
    w.u[0] = random_slab(g, 4, 1e-3, 5);
    w.u[1] = random_slab(g, 5, 1e-3, 5);
    w.eta = random_surface(g, 6, 1e-3, 5);
    w = kinematic_project(w);

    Checkpoint ckpt;
    ckpt.grid = g;
    ckpt.state = w;
    ckpt.forcing = forcing.descriptor;
    ckpt.gamma = 1.0;
    ckpt.volume_shift = 0.125;
    ckpt.profile_hash = profile_fingerprint(p);
    ckpt.provenance = "newton steps=3";

    const std::string path = temp_path("strata_ckpt.bin");
    save_checkpoint(path, ckpt);
    const Checkpoint back = load_checkpoint(path);

    CHECK(back.grid == g);
    CHECK(back.gamma == 1.0);
    CHECK(back.volume_shift == 0.125);
    CHECK(back.profile_hash == ckpt.profile_hash);
    CHECK(back.provenance == "newton steps=3");
    CHECK(back.forcing.kind == "gaussian-pressure");

    const double before = yspace_norm(residual(w, forcing, p, prof), 0);
    const double after = yspace_norm(residual(back.state, forcing, p, prof), 0);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: corruption is detected") {
    const Grid g(16.0, 16, 8, 1.0);
    Checkpoint ckpt;
    ckpt.grid = g;
    ckpt.state = State(g);
    const std::string path = temp_path("strata_ckpt_bad.bin");
    save_checkpoint(path, ckpt);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        const char junk = 0x5a;
        f.write(&junk, 1);
    }
    CHECK_THROWS_AS(load_checkpoint(path), CheckpointError);
    std::remove(path.c_str());
}

TEST_CASE("surface csv: two documented columns") {
    const Grid g(16.0, 16, 8, 1.0);
    const SurfaceField eta = random_surface(g, 9, 1.0, 4);
    const std::string path = temp_path("strata_eta.csv");
    write_surface_csv(path, eta);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,eta");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(g.nx));
    std::remove(path.c_str());
}

TEST_CASE("field container: named records round trip") {
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    container::write_header(buf);
    container::write_record(buf, {"sample", {2, 3}, {1, 2, 3, 4, 5, 6}});
    container::read_header(buf);
    const auto rec = container::read_record(buf);
    CHECK(rec.name == "sample");
    REQUIRE(rec.shape.size() == 2);
    CHECK(rec.shape[0] == 2);
    CHECK(rec.payload[5] == 6);
}

TEST_CASE("driver: identical config and seed give bit-identical artifacts") {
    const std::string path = temp_path("strata_cfg2.json");
    {
        std::ofstream out(path);
        out << kConfigJson;
    }
    RunConfig cfg = load_config(path);
    cfg.max_steps = 8;
    const auto dir_a = std::filesystem::temp_directory_path() / "strata_run_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "strata_run_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    CHECK(run_solve(cfg, dir_a.string(), 7, "") == 0);
    CHECK(run_solve(cfg, dir_b.string(), 7, "") == 0);
    for (const char* name : {"manifest.txt", "checkpoint.bin", "surface.csv"}) {
        std::ifstream fa(dir_a / name, std::ios::binary), fb(dir_b / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK(!sa.str().empty());
    }
    // resuming from the produced checkpoint converges immediately
    CHECK(run_solve(cfg, dir_b.string(), 7, (dir_a / "checkpoint.bin").string()) == 0);
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    std::remove(path.c_str());
}
