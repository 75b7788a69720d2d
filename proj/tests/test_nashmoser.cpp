#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "strata/nashmoser.hpp"
#include "strata/norms.hpp"
#include "strata/solver.hpp"

using namespace strata;

namespace {

// --------------------------------------------------------------------------
// scalar periodic toy with one derivative of loss: Psi(u) = u + d1(u^2)/2

const Grid kToyGrid(8.0, 64, 8, 1.0);

nm::BanachScaleSpec<SurfaceField, SurfaceField> toy_scales() {
    nm::BanachScaleSpec<SurfaceField, SurfaceField> sc;
    sc.norm_x = [](const SurfaceField& f, int s) { return sobolev_norm(f, double(s)); };
    sc.norm_y = sc.norm_x;
    sc.smooth_x = [](const SurfaceField& f, int j) {
        return j == 0 ? SurfaceField(f.grid()) : smooth_cutoff(f, j);
    };
    sc.smooth_y = sc.smooth_x;
    sc.block_y = [](const SurfaceField& f, int j) { return lp_block(f, j); };
    return sc;
}

SurfaceField toy_map(const SurfaceField& u) {
    SurfaceField quad = pointwise(u, u);
    quad *= 0.5;
    return u + quad.derivative();
}

// exact inverse of DPsi(v) h = h + d1(v h) via a dense solve on mode dofs
SurfaceField toy_inverse(const SurfaceField& v, const SurfaceField& f) {
    const Grid& g = v.grid();
    const std::size_t n = g.nx - 1;
    auto pack = [&](const SurfaceField& x) {
        const auto& s = x.spectrum();
        Eigen::VectorXd out(n);
        for (std::size_t md = 0; md < n; ++md) {
            const std::size_t k = (md + 1) / 2;
            out[md] = md == 0 ? s[k].real()
                              : (md % 2 == 1 ? 2.0 * s[k].real() : -2.0 * s[k].imag());
        }
        return out;
    };
    auto unpack = [&](const Eigen::VectorXd& x) {
        std::vector<Complex> spec(g.nx / 2 + 1, 0.0);
        for (std::size_t md = 0; md < n; ++md) {
            const std::size_t k = (md + 1) / 2;
            const Complex unit = md == 0 ? Complex(1, 0)
                                         : (md % 2 == 1 ? Complex(0.5, 0) : Complex(0, -0.5));
            spec[k] += unit * x[md];
        }
        return SurfaceField::from_spectrum(g, spec);
    };
    Eigen::MatrixXd A(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = 1.0;
        const SurfaceField basis = unpack(e);
        SurfaceField img = basis + pointwise(v, basis).derivative();
        A.col(j) = pack(img);
    }
    return unpack(A.partialPivLu().solve(pack(f)));
}

nm::ProblemSpec<SurfaceField, SurfaceField> toy_problem() {
    nm::ProblemSpec<SurfaceField, SurfaceField> spec;
    spec.map = toy_map;
    spec.inverse = toy_inverse;
    spec.loss_order = 1;
    spec.base_index = 2;
    spec.top_index = 12;
    return spec;
}

}  // namespace

TEST_CASE("seed: zero data produces the all-zero frame") {
    auto st = nm::seed(toy_problem(), toy_scales(), SurfaceField(kToyGrid), SurfaceField(kToyGrid));
    CHECK(sobolev_norm(st.u, 0.0) == 0.0);
    CHECK(sobolev_norm(st.v, 0.0) == 0.0);
    CHECK(sobolev_norm(st.y, 0.0) == 0.0);
    CHECK(sobolev_norm(st.f, 0.0) == 0.0);
    CHECK(sobolev_norm(st.h, 0.0) <= 1e-14);
    CHECK(sobolev_norm(st.e, 0.0) <= 1e-14);
}

TEST_CASE("seed identities: f0 = Delta_0 g = S_1 g and h0 = L(0) f0") {
    const SurfaceField g = random_surface(kToyGrid, 3, 1e-3, 20);
    auto st = nm::seed(toy_problem(), toy_scales(), g, SurfaceField(kToyGrid));
    SurfaceField d0 = lp_block(g, 0) - st.f;
    CHECK(sobolev_norm(d0, 0.0) <= 1e-15);
    SurfaceField s1 = smooth_cutoff(g, 1) - st.f;
    CHECK(sobolev_norm(s1, 0.0) <= 1e-15);
    SurfaceField h0 = toy_inverse(SurfaceField(kToyGrid), st.f) - st.h;
    CHECK(sobolev_norm(h0, 0.0) <= 1e-15);
}

TEST_CASE("seed remainder is second order: halving g quarters e0") {
    const SurfaceField g = random_surface(kToyGrid, 5, 1e-2, 10);
    auto st1 = nm::seed(toy_problem(), toy_scales(), g, SurfaceField(kToyGrid));
    SurfaceField half = g;
    half *= 0.5;
    auto st2 = nm::seed(toy_problem(), toy_scales(), half, SurfaceField(kToyGrid));
    const double ratio = sobolev_norm(st1.e, 0.0) / sobolev_norm(st2.e, 0.0);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("recursions: y-identities, telescoping, and partial sums") {
    const SurfaceField g = random_surface(kToyGrid, 7, 1e-3, 20);
    const auto prob = toy_problem();
    const auto sc = toy_scales();

    std::vector<nm::IterationState<SurfaceField, SurfaceField>> hist;
    hist.push_back(nm::seed(prob, sc, g, SurfaceField(kToyGrid)));
    for (int j = 1; j <= 5; ++j) hist.push_back(nm::step(prob, sc, g, hist.back()));

    // j = 1: y_1 = -S_1 e_0
    SurfaceField y1 = smooth_cutoff(hist[0].e, 1);
    y1 *= -1.0;
    CHECK(sobolev_norm(y1 - hist[1].y, 0.0) <= 1e-12);

    // j >= 2: y_j = -S_j e_{j-1} - Delta_{j-1} sum_{n <= j-2} e_n
    for (int j = 2; j <= 5; ++j) {
        SurfaceField acc(kToyGrid);
        for (int n = 0; n + 2 <= j; ++n) acc += hist[n].e;
        SurfaceField expect = smooth_cutoff(hist[j - 1].e, j);
        expect += lp_block(acc, j - 1);
        expect *= -1.0;
        CHECK(sobolev_norm(expect - hist[j].y, 0.0) <= 1e-12);
    }

    // telescoping: u_{j+1} = sum_{n <= j} h_n
    for (int j = 1; j <= 5; ++j) {
        SurfaceField acc(kToyGrid);
        for (int n = 0; n < j; ++n) acc += hist[n].h;
        CHECK(sobolev_norm(acc - hist[j].u, 0.0) <= 1e-12);
    }

    // partial sums: sum_{n <= j} y_n = -S_j sum_{n <= j-1} e_n
    for (int j = 1; j <= 5; ++j) {
        SurfaceField ys(kToyGrid), es(kToyGrid);
        for (int n = 0; n <= j; ++n) ys += hist[n].y;
        for (int n = 0; n < j; ++n) es += hist[n].e;
        SurfaceField rhs = smooth_cutoff(es, j);
        rhs *= -1.0;
        CHECK(sobolev_norm(ys - rhs, 0.0) <= 1e-12);
    }

    // data decomposition: sum_{j <= J} Delta_j g = S_{J+1} g
    SurfaceField acc(kToyGrid);
    for (int j = 0; j <= 4; ++j) acc += lp_block(g, j);
    CHECK(sobolev_norm(acc - smooth_cutoff(g, 5), 0.0) <= 1e-13);
}

TEST_CASE("linear problem: errors vanish and the limit is the smoothed datum") {
    // Psi = identity with exact inverse: e_j = 0 and u_{J+1} = S_{J+1} g
    nm::ProblemSpec<SurfaceField, SurfaceField> spec;
    spec.map = [](const SurfaceField& u) { return u; };
    spec.inverse = [](const SurfaceField&, const SurfaceField& f) { return f; };
    spec.loss_order = 1;
    spec.base_index = 2;
    spec.top_index = 12;
    const SurfaceField g = random_surface(kToyGrid, 9, 1.0, 20);
    const auto sc = toy_scales();

    std::vector<nm::IterationState<SurfaceField, SurfaceField>> hist;
    hist.push_back(nm::seed(spec, sc, g, SurfaceField(kToyGrid)));
    for (int j = 1; j <= 4; ++j) {
        CHECK(sobolev_norm(hist.back().e, 0.0) <= 1e-13);
        hist.push_back(nm::step(spec, sc, g, hist.back()));
    }
    SurfaceField u5 = hist.back().u + hist.back().h;
    CHECK(sobolev_norm(u5 - smooth_cutoff(g, 5), 0.0) <= 1e-12);
}

TEST_CASE("toy run: converges at small amplitude, reports divergence at unit amplitude") {
    const auto prob = toy_problem();
    const auto sc = toy_scales();
    nm::Stopping stop;
    stop.max_steps = 30;
    stop.residual_tol = 1e-11;

    const SurfaceField small_g = random_surface(kToyGrid, 11, 1e-3, 20);
    nm::RunReport rep;
    const SurfaceField u = nm::run(prob, sc, small_g, stop, SurfaceField(kToyGrid), &rep);
    CHECK(rep.converged);
    SurfaceField res = toy_map(u) - small_g;
    CHECK(sobolev_norm(res, 0.0) <= 1e-11);

    const SurfaceField big_g = random_surface(kToyGrid, 11, 1.0, 20);
    nm::RunReport rep_big;
    nm::run(prob, sc, big_g, stop, SurfaceField(kToyGrid), &rep_big);
    CHECK_FALSE(rep_big.converged);
    MESSAGE("unit-amplitude stop reason: ", rep_big.stop_reason);
}

TEST_CASE("newton on the toy contracts quadratically") {
    const auto prob = toy_problem();
    const auto sc = toy_scales();
    nm::Stopping stop;
    stop.max_steps = 12;
    stop.residual_tol = 1e-13;
    const SurfaceField g = random_surface(kToyGrid, 13, 1e-2, 6);
    nm::RunReport rep;
    const SurfaceField u = nm::newton_run(prob, sc, g, stop, SurfaceField(kToyGrid), &rep);
    CHECK(rep.converged);
    REQUIRE(rep.history.size() >= 3);
    // residual ratios square up until roundoff
    const double r1 = rep.history[1].residual / rep.history[0].residual;
    const double r2 = rep.history[2].residual / rep.history[1].residual;
    CHECK(r2 <= 10.0 * r1 * r1 + 1e-9);
    SurfaceField res = toy_map(u) - g;
    CHECK(sobolev_norm(res, 0.0) <= 1e-13);
}

TEST_CASE("traveling wave: newton and nash-moser limits agree at small amplitude") {
    const Grid grid(16.0, 32, 16, 1.0);
    PhysicalParams p;
    p.n = 2;
    p.depth = 1.0;
    p.gravity = 1.0;
    p.surface_tension = 1.0;
    p.external_pressure = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, 1.0);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    const auto prof = build_profile(p, grid);
    const Forcing forcing = Forcing::gaussian_pressure(1.0, grid.L, 8.0, 1.0, 1.0, 1e-3);
    const TravelingWaveProblem tw(grid, p, prof, forcing);

    nm::Stopping stop;
    stop.max_steps = 20;
    stop.residual_tol = 1e-10;
    const SolveOutcome newton = solve_traveling_wave(tw, stop, false);
    const SolveOutcome nmrun = solve_traveling_wave(tw, stop, true);
    CHECK(newton.report.converged);
    CHECK(nmrun.report.converged);
    CHECK(newton.residual_norm <= 1e-10);
    CHECK(nmrun.residual_norm <= 1e-10);
    CHECK(xspace_norm(newton.solution - nmrun.solution, 0) <= 1e-8);
    double peak = 0.0;
    for (double v : newton.solution.eta.values()) peak = std::max(peak, std::abs(v));
    CHECK(peak > 0.0);
    MESSAGE("newton steps ", newton.report.steps, ", nash-moser steps ", nmrun.report.steps,
            ", eta peak ", peak);
}

TEST_CASE("engine bookkeeping holds on the pde problem") {
    const Grid grid(16.0, 32, 16, 1.0);
    PhysicalParams p;
    p.n = 2;
    p.depth = 1.0;
    p.gravity = 1.0;
    p.surface_tension = 1.0;
    p.external_pressure = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, 1.0);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    const auto prof = build_profile(p, grid);
    const Forcing forcing = Forcing::gaussian_pressure(1.0, grid.L, 8.0, 1.0, 1.0, 1e-3);
    const TravelingWaveProblem tw(grid, p, prof, forcing);

    const auto prob = tw.problem();
    const auto sc = tw.scales();
    const Residual g = tw.target();
    std::vector<nm::IterationState<State, Residual>> hist;
    hist.push_back(nm::seed(prob, sc, g, tw.zero_state()));
    for (int j = 1; j <= 3; ++j) hist.push_back(nm::step(prob, sc, g, hist.back()));

    Residual y1 = smooth_cutoff(hist[0].e, 1);
    y1.scale(-1.0);
    CHECK(yspace_norm(y1 - hist[1].y, 0) <= 1e-12);

    for (int j = 2; j <= 3; ++j) {
        Residual acc(grid);
        for (int n = 0; n + 2 <= j; ++n) acc.add_scaled(1.0, hist[n].e);
        Residual expect = smooth_cutoff(hist[j - 1].e, j);
        expect.add_scaled(1.0, lp_block(acc, j - 1));
        expect.scale(-1.0);
        CHECK(yspace_norm(expect - hist[j].y, 0) <= 1e-12);
    }

    for (int j = 1; j <= 3; ++j) {
        State acc(grid);
        for (int n = 0; n < j; ++n) acc.add_scaled(1.0, hist[n].h);
        CHECK(xspace_norm(acc - hist[j].u, 0) <= 1e-12);
    }
}

TEST_CASE("zero data converges at step zero") {
    const auto prob = toy_problem();
    const auto sc = toy_scales();
    nm::Stopping stop;
    stop.residual_tol = 1e-12;
    nm::RunReport rep;
    const SurfaceField u =
        nm::run(prob, sc, SurfaceField(kToyGrid), stop, SurfaceField(kToyGrid), &rep);
    CHECK(rep.converged);
    CHECK(rep.steps == 1);
    CHECK(sobolev_norm(u, 0.0) == 0.0);
}
