#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "strata/errors.hpp"
#include "strata/norms.hpp"

using namespace strata;

namespace {

const Grid kGrid(8.0, 32, 12, 1.0);

SurfaceField cosine_mode(const Grid& g, std::size_t k, double amp = 1.0) {
    std::vector<double> v(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i)
        v[i] = amp * std::cos(2.0 * std::numbers::pi * k * i / g.nx);
    return SurfaceField::from_values(g, v);
}

}  // namespace

TEST_CASE("sobolev: zero field has zero norm") {
    CHECK(sobolev_norm(SurfaceField(kGrid), 2.0) == 0.0);
    CHECK(sobolev_norm(SlabField(kGrid), 2) == 0.0);
}

TEST_CASE("sobolev: single surface mode carries weight <xi>^{2s}") {
    // f = cos(2 pi k x / L), xi = k / L >= 1
    const Grid g(4.0, 32, 12, 1.0);
    const std::size_t k = 8;  // xi = 2
    const SurfaceField f = cosine_mode(g, k);
    const double l2 = sobolev_norm(f, 0.0);
    CHECK(l2 == doctest::Approx(std::sqrt(g.L / 2.0)).epsilon(1e-12));
    for (double s : {0.5, 1.0, 2.5}) {
        const double xi = g.xi(k);
        const double expect = std::pow(1.0 + xi * xi, s / 2.0) * l2;
        CHECK(sobolev_norm(f, s) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("sobolev: H^s <= H^{s+1} (weight monotonicity)") {
    const SurfaceField f = random_surface(kGrid, 7, 1.0, 10);
    CHECK(sobolev_norm(f, 1.0) <= sobolev_norm(f, 2.0));
    const SlabField h = random_slab(kGrid, 8, 1.0, 10);
    CHECK(sobolev_norm(h, 1) <= sobolev_norm(h, 2));
}

TEST_CASE("sobolev: slab H^0 equals the quadrature L^2 norm") {
    const SlabField h = random_slab(kGrid, 9, 1.0, 12);
    double quads = 0.0;
    const auto& w = kGrid.vertical().quad_weights();
    for (std::size_t iz = 0; iz < kGrid.nz; ++iz) {
        double row = 0.0;
        for (std::size_t ix = 0; ix < kGrid.nx; ++ix)
            row += h.value(iz, ix) * h.value(iz, ix);
        quads += w[iz] * row * kGrid.L / kGrid.nx;
    }
    CHECK(sobolev_norm(h, 0) == doctest::Approx(std::sqrt(quads)).epsilon(1e-12));
}

TEST_CASE("anisotropic: single low mode xi = 0.25 carries weight 1 + xi^2") {
    const Grid g(8.0, 32, 12, 1.0);
    const std::size_t k = 2;  // xi = 0.25
    const SurfaceField f = cosine_mode(g, k);
    const double l2 = sobolev_norm(f, 0.0);
    const double expect = std::sqrt(1.0 + 0.0625) * l2;
    CHECK(anisotropic_norm(f, 3.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("anisotropic: d = 2 single mode xi = (0, 0.5) has weight 0.25") {
    const std::size_t n = 8;
    const double L1 = 4.0, L2 = 4.0;
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            v[i * n + j] = std::cos(2.0 * std::numbers::pi * 2.0 * j / n);  // k2 = 2 -> xi2 = 0.5
    auto f = Surface2Field::from_values(L1, L2, n, n, v);
    // per unit L^2 mass the weight is (xi1^2 + |xi|^4)/|xi|^2 = 0.0625/0.25
    double l2 = 0.0;
    for (double x : v) l2 += x * x;
    l2 = std::sqrt(l2 * L1 * L2 / (n * n));
    CHECK(anisotropic_norm(f, 1.0) == doctest::Approx(0.5 * l2).epsilon(1e-12));
}

TEST_CASE("anisotropic: pure high-frequency content matches the sobolev norm") {
    const Grid g(2.0, 32, 12, 1.0);
    SurfaceField f = random_surface(g, 11, 1.0, 12);
    f = project_high(f, 1.0);
    for (double s : {0.0, 1.5, 3.5})
        CHECK(anisotropic_norm(f, s) == doctest::Approx(sobolev_norm(f, s)).epsilon(1e-12));
}

TEST_CASE("anisotropic: nonzero mean is rejected") {
    std::vector<double> v(kGrid.nx, 1.0);
    const SurfaceField f = SurfaceField::from_values(kGrid, v);
    CHECK_THROWS_AS(anisotropic_norm(f, 1.0), ConstraintError);
}

TEST_CASE("anisotropic algebra exponents r_d") {
    CHECK(anisotropic_algebra_power(1) == 1);
    CHECK(anisotropic_algebra_power(2) == 4);
    CHECK(anisotropic_algebra_power(3) == 3);
}

TEST_CASE("frequency splitting: discrete sharp-cutoff ratio is exactly 1") {
    const Grid g(8.0, 64, 12, 1.0);
    for (std::uint64_t seed : {1, 2, 3}) {
        SurfaceField eta = random_surface(g, seed, 1.0, 30);
        const double whole = anisotropic_norm(eta, 2.5);
        const double low = anisotropic_norm(project_low(eta, 1.0), 2.5);
        const double high = sobolev_norm(project_high(eta, 1.0), 2.5);
        const double split = std::sqrt(low * low + high * high);
        CHECK(whole == doctest::Approx(split).epsilon(1e-12));
    }
}

TEST_CASE("projectors: partition of unity and band-limited fixed point") {
    SurfaceField f = random_surface(kGrid, 21, 2.0, 14);
    const SurfaceField sum = project_low(f, 1.0) + project_high(f, 1.0);
    SurfaceField diff = sum - f;
    CHECK(sobolev_norm(diff, 0.0) <= 1e-14 * sobolev_norm(f, 0.0));

    SurfaceField band = project_low(f, 1.0);
    SurfaceField fixed = project_low(band, 1.0) - band;
    CHECK(sobolev_norm(fixed, 0.0) <= 1e-15);

    SlabField h = random_slab(kGrid, 22, 2.0, 14);
    SlabField hsum = project_low(h, 1.0) + project_high(h, 1.0) - h;
    CHECK(sobolev_norm(hsum, 0) <= 1e-14 * sobolev_norm(h, 0));
}

TEST_CASE("low-frequency band: W^{k,inf} controlled by the anisotropic mass") {
    // finite measured ratio on random samples (paper-backed qualitative bound)
    const Grid g(8.0, 64, 12, 1.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SurfaceField eta = project_low(random_surface(g, seed, 1.0, 30), 1.0);
        const SurfaceField slope = eta.derivative();
        double linf = 0.0;
        for (double v : slope.values()) linf = std::max(linf, std::abs(v));
        const double mass = anisotropic_norm(eta, 0.0);
        if (mass > 0.0) worst = std::max(worst, linf / mass);
    }
    CHECK(worst > 0.0);
    CHECK(worst < 50.0);  // recorded finite ratio
    MESSAGE("measured W^{1,inf}/H^0-aniso ratio on low band: ", worst);
}

TEST_CASE("smoothing: band-limited data is a fixed point of every S_j") {
    const Grid g(8.0, 32, 12, 1.0);
    SurfaceField f = project_low(random_surface(g, 31, 1.0, 16), 1.0);
    for (int j = 0; j <= 4; ++j) {
        SurfaceField diff = smooth_cutoff(f, j) - f;
        CHECK(sobolev_norm(diff, 0.0) <= 1e-14);
    }
}

TEST_CASE("smoothing axioms hold with explicit constants on random samples") {
    const Grid g(4.0, 64, 12, 1.0);
    const double slack = 1.0 + 1e-12;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SurfaceField f = random_surface(g, seed, 1.0, 31);
        for (int j = 1; j <= 4; ++j) {
            const SurfaceField sf = smooth_cutoff(f, j);
            const SurfaceField rf = f - sf;
            const SurfaceField df = lp_block(f, j);
            for (double s : {0.0, 1.0, 2.0}) {
                for (double t : {s + 1.0, s + 2.0}) {
                    // S1: ||S_j f||_s <= ||f||_s
                    CHECK(sobolev_norm(sf, s) <= slack * sobolev_norm(f, s));
                    // S2: ||S_j f||_t <= 2^{(t-s)/2} 2^{j(t-s)} ||S_j f||_s
                    CHECK(sobolev_norm(sf, t) <=
                          slack * std::pow(2.0, 0.5 * (t - s)) * std::ldexp(1.0, j * int(t - s)) *
                              sobolev_norm(sf, s));
                    // S3: ||(I-S_j) f||_s <= 2^{-j(t-s)} ||(I-S_j) f||_t
                    CHECK(sobolev_norm(rf, s) <=
                          slack * std::ldexp(1.0, -j * int(t - s)) * sobolev_norm(rf, t));
                    // S4 (both directions)
                    CHECK(sobolev_norm(df, t) <=
                          slack * std::pow(5.0, 0.5 * (t - s)) * std::ldexp(1.0, j * int(t - s)) *
                              sobolev_norm(df, s));
                    CHECK(sobolev_norm(df, s) <=
                          slack * std::ldexp(1.0, -j * int(t - s)) * sobolev_norm(df, t));
                }
            }
        }
    }
}

TEST_CASE("littlewood-paley: exact partition of the squared norm (A = 1)") {
    const Grid g(4.0, 64, 12, 1.0);
    for (std::uint64_t seed : {5, 6}) {
        SurfaceField f = random_surface(g, seed, 1.0, 31);
        for (double s : {0.0, 2.0}) {
            double sum = 0.0;
            for (int j = 0; j <= 6; ++j) {
                const double nj = sobolev_norm(lp_block(f, j), s);
                sum += nj * nj;
            }
            const double whole = sobolev_norm(f, s);
            CHECK(sum == doctest::Approx(whole * whole).epsilon(1e-12));
        }
    }
}

TEST_CASE("littlewood-paley: partial sums recover S_{J+1}") {
    const Grid g(4.0, 64, 12, 1.0);
    SurfaceField f = random_surface(g, 41, 1.0, 31);
    for (int J : {1, 3}) {
        SurfaceField acc(g);
        for (int j = 0; j <= J; ++j) acc += lp_block(f, j);
        SurfaceField diff = acc - smooth_cutoff(f, J + 1);
        CHECK(sobolev_norm(diff, 0.0) <= 1e-13 * sobolev_norm(f, 0.0));
    }
}

TEST_CASE("hminus1: single mode equals |xi|^{-1} L2 mass") {
    const Grid g(8.0, 32, 12, 1.0);
    const std::size_t k = 2;  // xi = 0.25
    const SurfaceField f = cosine_mode(g, k);
    const double expect = sobolev_norm(f, 0.0) / g.xi(k);
    CHECK(hminus1_seminorm(f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("hhat: zero field and d1-derivative structure") {
    CHECK(hhat_norm(SlabField(kGrid), 1) == 0.0);
    // g = d_x(slab): vertical integral has H^-1 mass bounded by the primitive
    SlabField prim = random_slab(kGrid, 51, 1.0, 10);
    SlabField der = prim.dx();
    const SurfaceField column = der.integrate_vertical();
    const double semi = hminus1_seminorm(column);
    const double prim_mass = sobolev_norm(prim.integrate_vertical(), 0.0);
    CHECK(semi <= (1.0 + 1e-12) * 2.0 * std::numbers::pi * prim_mass);
    CHECK(std::isfinite(hhat_norm(der, 1)));
}

TEST_CASE("xspace: zero state, norms and constraint report") {
    State w(kGrid);
    CHECK(xspace_norm(w, 0) == 0.0);
    auto rep = xspace_constraints(w);
    CHECK(rep.admissible());
}

TEST_CASE("xspace constraints: kinematic violation equals ||d1 eta||_{H^{1/2}}") {
    State w(kGrid);
    w.eta = random_surface(kGrid, 61, 1.0, 6);
    auto rep = xspace_constraints(w);
    CHECK(rep.kinematic_violation ==
          doctest::Approx(sobolev_norm(w.eta.derivative(), 0.5)).epsilon(1e-12));
    CHECK(rep.bottom_violation == 0.0);
}

TEST_CASE("band-limited algebra constant C(1) for d = 2 is finite and reproducible") {
    const std::size_t n = 12;
    double measured = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        // random band-limited pair on a tiny torus
        std::vector<double> a(n * n), b(n * n);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double x = 2.0 * std::numbers::pi * i / n;
                const double y = 2.0 * std::numbers::pi * j / n;
                a[i * n + j] = dist(rng) * std::cos(x) + dist(rng) * std::sin(y);
                b[i * n + j] = dist(rng) * std::cos(y) + dist(rng) * std::sin(x);
            }
        }
        auto fa = Surface2Field::from_values(8.0, 8.0, n, n, a);
        auto fb = Surface2Field::from_values(8.0, 8.0, n, n, b);
        fa.remove_mean();
        fb.remove_mean();
        std::vector<double> prod(n * n);
        for (std::size_t i = 0; i < n * n; ++i) prod[i] = fa.values()[i] * fb.values()[i];
        auto fp = Surface2Field::from_values(8.0, 8.0, n, n, prod);
        fp.remove_mean();
        const double na = anisotropic_norm(fa, 0.0), nb = anisotropic_norm(fb, 0.0);
        const double np = anisotropic_norm(fp, 0.0);
        if (na > 0 && nb > 0) measured = std::max(measured, np / (na * nb));
    }
    CHECK(measured > 0.0);
    CHECK(std::isfinite(measured));
    MESSAGE("measured band-limited algebra constant C(1): ", measured);
}

TEST_CASE("frequency splitting at d = 2 is exact for sharp cutoffs") {
    const std::size_t n = 10;
    const double L1 = 6.0, L2 = 6.0;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n * n);
    for (double& x : v) x = dist(rng);
    auto f = Surface2Field::from_values(L1, L2, n, n, v);
    f.remove_mean();
    // split by hand over the full mode set
    const auto& spec = f.spectrum();
    double low = 0.0, high = 0.0, whole_sq = 0.0;
    const double s = 1.5;
    for (std::size_t k1 = 0; k1 < n; ++k1) {
        const long s1 = k1 <= n / 2 ? long(k1) : long(k1) - long(n);
        if (std::labs(s1) == long(n / 2)) continue;
        for (std::size_t k2 = 0; k2 < n; ++k2) {
            const long s2 = k2 <= n / 2 ? long(k2) : long(k2) - long(n);
            if (std::labs(s2) == long(n / 2)) continue;
            if (s1 == 0 && s2 == 0) continue;
            const double x1 = double(s1) / L1, x2 = double(s2) / L2;
            const double r = std::hypot(x1, x2);
            const double mass = std::norm(spec[k1 * n + k2]) * L1 * L2;
            const double w_low = (x1 * x1 + r * r * r * r) / (r * r);
            if (r < 1.0)
                low += w_low * mass;
            else
                high += std::pow(1.0 + r * r, s) * mass;
        }
    }
    whole_sq = anisotropic_norm(f, s);
    whole_sq *= whole_sq;
    CHECK(whole_sq == doctest::Approx(low + high).epsilon(1e-12));
}
