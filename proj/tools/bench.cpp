// Microbenchmark comparing the serial reference kernels against the OpenMP
// variants, plus the end-to-end operator evaluation in both modes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "strata/chebyshev.hpp"
#include "strata/kernels.hpp"
#include "strata/norms.hpp"
#include "strata/operators.hpp"

using namespace strata;

namespace {

double time_ns(const std::function<void()>& body, int reps) {
    body();  // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::nano>(stop - start).count() / reps;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

void report(const char* name, double serial_ns, double omp_ns) {
    std::printf("%-28s %12.0f ns %12.0f ns %8.2fx\n", name, serial_ns, omp_ns,
                serial_ns / omp_ns);
}

}  // namespace

int main() {
    std::printf("%-28s %15s %15s %8s (threads: %d)\n", "kernel", "serial", "openmp", "speedup",
                kernels::thread_count());

    {
        const std::size_t n = 1 << 18;
        const auto a = random_vector(n, 1), b = random_vector(n, 2);
        std::vector<double> out(n);
        report("pointwise multiply",
               time_ns([&] { kernels::serial::multiply(a.data(), b.data(), out.data(), n); }, 50),
               time_ns([&] { kernels::openmp::multiply(a.data(), b.data(), out.data(), n); }, 50));
        report("axpy",
               time_ns([&] { kernels::serial::axpy(0.5, a.data(), out.data(), n); }, 50),
               time_ns([&] { kernels::openmp::axpy(0.5, a.data(), out.data(), n); }, 50));
    }

    {
        const Chebyshev cheb(24, 1.0);
        const std::size_t nx = 96;
        const auto in = random_vector(24 * nx, 3);
        std::vector<double> out(in.size());
        report("chebyshev columns",
               time_ns([&] { kernels::serial::apply_columns(cheb.diff_matrix().data(), 24, nx,
                                                            in.data(), out.data()); }, 200),
               time_ns([&] { kernels::openmp::apply_columns(cheb.diff_matrix().data(), 24, nx,
                                                            in.data(), out.data()); }, 200));
    }

    {
        const Grid g(16.0, 64, 24, 1.0);
        PhysicalParams p;
        p.surface_tension = 1.0;
        p.pressure = PressureLaw::make_polytropic(1.0, 1.0);
        p.viscosity = ViscosityLaw::constant(1.0, 1.0);
        const auto prof = build_profile(p, g);
        const Forcing forcing = Forcing::gaussian_pressure(1.0, g.L, 8.0, 1.0, 1.0, 1e-3);
        State w(g);
        w.u[0] = random_slab(g, 5, 1e-3, 8);
        w.eta = random_surface(g, 6, 1e-3, 8);
        w = kinematic_project(w);

        const auto run = [&] { residual(w, forcing, p, prof); };
        kernels::set_mode(kernels::Mode::serial);
        const double serial_ns = time_ns(run, 10);
        kernels::set_mode(kernels::Mode::openmp);
        const double omp_ns = time_ns(run, 10);
        report("operator evaluation 64x24", serial_ns, omp_ns);
    }
    return 0;
}
