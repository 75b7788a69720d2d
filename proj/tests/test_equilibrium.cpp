#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strata/equilibrium.hpp"
#include "strata/errors.hpp"

using namespace strata;

namespace {

PhysicalParams unit_polytropic(double alpha) {
    PhysicalParams p;
    p.n = 2;
    p.depth = 1.0;
    p.gravity = 1.0;
    p.external_pressure = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, alpha);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    return p;
}

// independent oracle: integrate the hydrostatic Cauchy problem
//   rho' = -g rho / P'(rho),  rho(b) = P^{-1}(P_ext)
// downward from the surface with RK4
double rho_by_ode(const PhysicalParams& p, double rho_surface, double y_target) {
    const int steps = 4000;
    const double h = (y_target - p.depth) / steps;
    double rho = rho_surface;
    auto slope = [&](double r) { return -p.gravity * r / p.pressure.slope(r); };
    for (int i = 0; i < steps; ++i) {
        const double k1 = slope(rho);
        const double k2 = slope(rho + 0.5 * h * k1);
        const double k3 = slope(rho + 0.5 * h * k2);
        const double k4 = slope(rho + h * k3);
        rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

}  // namespace

TEST_CASE("compatibility: polytropic laws always pass with divergent margin") {
    for (double alpha : {1.0, 1.4, 2.0}) {
        auto rep = check_compatibility(unit_polytropic(alpha));
        CHECK(rep.ok);
        CHECK(rep.pressure_attains_external);
        CHECK(rep.integral_divergent);
        CHECK(std::isinf(rep.integral_margin));
    }
}

TEST_CASE("compatibility: arctan law cannot attain external pressure 2") {
    PhysicalParams p = unit_polytropic(1.0);
    p.external_pressure = 2.0;
    p.pressure = PressureLaw::custom([](double t) { return std::atan(t); },
                                     [](double t) { return 1.0 / (1.0 + t * t); });
    auto rep = check_compatibility(p);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.pressure_attains_external);
}

TEST_CASE("compatibility: non-monotone samples are rejected") {
    PhysicalParams p = unit_polytropic(1.0);
    p.pressure = PressureLaw::custom([](double t) { return -t; }, [](double) { return -1.0; });
    CHECK_THROWS_AS(check_compatibility(p), ConstitutiveError);
}

TEST_CASE("profile: alpha = 1 closed form rho(y) = exp(1 - y)") {
    const PhysicalParams p = unit_polytropic(1.0);
    const Grid g(16.0, 16, 16, 1.0);
    const auto prof = build_profile(p, g);
    for (std::size_t j = 0; j < g.nz; ++j) {
        const double y = g.y(j);
        CHECK(prof.density_nodes()[j] == doctest::Approx(std::exp(1.0 - y)).epsilon(1e-12));
    }
    CHECK(prof.density(0.0) == doctest::Approx(2.718281828).epsilon(1e-9));
    CHECK(prof.density(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile: alpha = 2 closed form rho(y) = 1 + (1 - y)/2") {
    const PhysicalParams p = unit_polytropic(2.0);
    const Grid g(16.0, 16, 16, 1.0);
    const auto prof = build_profile(p, g);
    for (std::size_t j = 0; j < g.nz; ++j) {
        const double y = g.y(j);
        CHECK(prof.density_nodes()[j] == doctest::Approx(1.0 + 0.5 * (1.0 - y)).epsilon(1e-12));
    }
    CHECK(prof.density(0.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("profile: closed forms agree with direct ODE integration") {
    for (double alpha : {1.0, 2.0}) {
        const PhysicalParams p = unit_polytropic(alpha);
        const Grid g(16.0, 16, 12, 1.0);
        const auto prof = build_profile(p, g);
        const double rho_b = prof.density(p.depth);
        for (double y : {0.0, 0.3, 0.7}) {
            const double oracle = rho_by_ode(p, rho_b, y);
            CHECK(prof.density(y) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("profile: generic law (tabulated-free custom) matches its polytropic twin") {
    // exercise quadrature + root-finding path with a custom law equal to t^2
    PhysicalParams p = unit_polytropic(2.0);
    p.pressure = PressureLaw::custom([](double t) { return t * t; },
                                     [](double t) { return 2.0 * t; });
    const Grid g(16.0, 16, 12, 1.0);
    const auto prof = build_profile(p, g);
    const auto twin = build_profile(unit_polytropic(2.0), g);
    for (std::size_t j = 0; j < g.nz; ++j)
        CHECK(prof.density_nodes()[j] ==
              doctest::Approx(twin.density_nodes()[j]).epsilon(1e-9));
    CHECK(prof.inverse_enthalpy(prof.enthalpy(1.3)) == doctest::Approx(1.3).epsilon(1e-10));
}

TEST_CASE("enthalpy: unit alpha=1 values H(1) = -1 and H^{-1}(0) = e") {
    const PhysicalParams p = unit_polytropic(1.0);
    const Grid g(16.0, 16, 12, 1.0);
    const auto prof = build_profile(p, g);
    CHECK(enthalpy_eval(prof, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(inverse_enthalpy_eval(prof, 0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("enthalpy: mutual inverses to 1e-10 relative") {
    const PhysicalParams p = unit_polytropic(2.0);
    const Grid g(16.0, 16, 12, 1.0);
    const auto prof = build_profile(p, g);
    for (double s : {0.3, 0.9, 1.0, 1.7, 3.2}) {
        const double round = inverse_enthalpy_eval(prof, enthalpy_eval(prof, s));
        CHECK(round == doctest::Approx(s).epsilon(1e-10));
    }
}

TEST_CASE("enthalpy: vacuum guard throws outside the image interval") {
    const PhysicalParams p = unit_polytropic(2.0);
    const Grid g(16.0, 16, 12, 1.0);
    const auto prof = build_profile(p, g);
    REQUIRE(std::isfinite(prof.h_min()));
    CHECK_THROWS_AS(inverse_enthalpy_eval(prof, prof.h_min() - 1.0), VacuumError);
}

TEST_CASE("profile invariants: monotone H, surface pressure, hydrostatic residual") {
    for (double alpha : {1.0, 2.0}) {
        const PhysicalParams p = unit_polytropic(alpha);
        const Grid g(16.0, 16, 20, 1.0);
        const auto prof = build_profile(p, g);

        // H' = P'(s)/s > 0 at samples
        for (double s : {0.5, 1.0, 2.0})
            CHECK(p.pressure.slope(s) / s > 0.0);

        // boundary condition P(rho(b)) = P_ext
        CHECK(p.pressure.value(prof.density_nodes()[g.nz - 1]) ==
              doctest::Approx(p.external_pressure).epsilon(1e-12));

        // ODE residual (P o rho)' + g rho = 0 with spectral differentiation
        const auto& cheb = g.vertical();
        std::vector<double> prho(g.nz), res(g.nz);
        for (std::size_t j = 0; j < g.nz; ++j)
            prho[j] = p.pressure.value(prof.density_nodes()[j]);
        cheb.differentiate(prho.data(), res.data());
        double worst = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < g.nz; ++j) {
            worst = std::max(worst, std::abs(res[j] + p.gravity * prof.density_nodes()[j]));
            scale = std::max(scale, p.gravity * prof.density_nodes()[j]);
        }
        CHECK(worst <= 1e-8 * scale);

        // [-g b, 0] inside the enthalpy image
        CHECK(prof.h_min() < -p.gravity * p.depth);
        CHECK(prof.h_max() > 0.0);

        // density decreasing and positive
        for (std::size_t j = 1; j < g.nz; ++j) {
            CHECK(prof.density_nodes()[j] > 0.0);
            CHECK(prof.density_nodes()[j] < prof.density_nodes()[j - 1]);
        }
    }
}
