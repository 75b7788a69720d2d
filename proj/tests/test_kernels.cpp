#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strata/chebyshev.hpp"
#include "strata/kernels.hpp"
#include "strata/norms.hpp"
#include "strata/operators.hpp"

using namespace strata;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

struct ModeGuard {
    kernels::Mode saved = kernels::mode();
    ~ModeGuard() { kernels::set_mode(saved); }
};

}  // namespace

TEST_CASE("pointwise kernels: serial and openmp variants agree bitwise") {
    const std::size_t n = 4096;
    const auto a = random_vector(n, 1);
    const auto b = random_vector(n, 2);
    std::vector<double> out_s(n), out_p(n);
    kernels::serial::multiply(a.data(), b.data(), out_s.data(), n);
    kernels::openmp::multiply(a.data(), b.data(), out_p.data(), n);
    CHECK(out_s == out_p);

    auto acc_s = random_vector(n, 3);
    auto acc_p = acc_s;
    kernels::serial::axpy(0.37, a.data(), acc_s.data(), n);
    kernels::openmp::axpy(0.37, a.data(), acc_p.data(), n);
    CHECK(acc_s == acc_p);
}

TEST_CASE("column kernel: serial and openmp variants agree bitwise") {
    const Chebyshev cheb(20, 1.0);
    const std::size_t nx = 96;
    const auto in = random_vector(20 * nx, 4);
    std::vector<double> out_s(in.size()), out_p(in.size());
    kernels::serial::apply_columns(cheb.diff_matrix().data(), 20, nx, in.data(), out_s.data());
    kernels::openmp::apply_columns(cheb.diff_matrix().data(), 20, nx, in.data(), out_p.data());
    CHECK(out_s == out_p);
}

TEST_CASE("execution mode does not change solver output bits") {
    ModeGuard guard;
    const Grid g(16.0, 32, 16, 1.0);
    PhysicalParams p;
    p.surface_tension = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, 1.0);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    const auto prof = build_profile(p, g);
    const Forcing forcing = Forcing::gaussian_pressure(1.0, g.L, 8.0, 1.0, 1.0, 1e-3);

    State w(g);
    w.q = random_slab(g, 11, 1e-3, 5);
    w.u[0] = random_slab(g, 12, 1e-3, 5);
    w.u[1] = random_slab(g, 13, 1e-3, 5);
    w.eta = random_surface(g, 14, 1e-3, 5);
    w = kinematic_project(w);

    kernels::set_mode(kernels::Mode::serial);
    const Residual rs = residual(w, forcing, p, prof);
    kernels::set_mode(kernels::Mode::openmp);
    const Residual rp = residual(w, forcing, p, prof);
    CHECK(rs.g.values() == rp.g.values());
    CHECK(rs.f[0].values() == rp.f[0].values());
    CHECK(rs.f[1].values() == rp.f[1].values());
    CHECK(rs.k[0].values() == rp.k[0].values());
    CHECK(rs.k[1].values() == rp.k[1].values());
}
