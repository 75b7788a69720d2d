#include "strata/verification.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "strata/bogovskii.hpp"
#include "strata/diagnostics.hpp"
#include "strata/errors.hpp"
#include "strata/norms.hpp"
#include "strata/operators.hpp"
#include "strata/solver.hpp"

namespace strata {

namespace {

PhysicalParams acceptance_params(double alpha = 1.0) {
    PhysicalParams p;
    p.n = 2;
    p.depth = 1.0;
    p.gravity = 1.0;
    p.surface_tension = 1.0;
    p.external_pressure = 1.0;
    p.pressure = PressureLaw::make_polytropic(1.0, alpha);
    p.viscosity = ViscosityLaw::constant(1.0, 1.0);
    return p;
}

State random_admissible(const Grid& g, std::uint64_t seed, double amp, std::size_t kmax) {
    State w(g);
    w.q = random_slab(g, seed, amp, kmax);
    w.u[0] = random_slab(g, seed + 101, amp, kmax);
    w.u[1] = random_slab(g, seed + 202, amp, kmax);
    w.eta = random_surface(g, seed + 303, amp, kmax);
    return kinematic_project(w);
}

Residual random_data(const Grid& g, std::uint64_t seed, double amp, std::size_t kmax) {
    Residual y(g);
    y.g = random_slab(g, seed, amp, kmax);
    const double mean = y.g.integrate_vertical().mean() / g.depth;
    std::vector<double> v = y.g.values();
    for (double& x : v) x -= mean;
    y.g = SlabField::from_values(g, v);
    y.f[0] = random_slab(g, seed + 11, amp, kmax);
    y.f[1] = random_slab(g, seed + 22, amp, kmax);
    y.k[0] = random_surface(g, seed + 33, amp, kmax, false);
    y.k[1] = random_surface(g, seed + 44, amp, kmax, false);
    return y;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// rho' = -g rho / P'(rho) integrated downward from the surface
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

// ---------------------------------------------------------------------------

CheckResult check_equilibrium_closed_forms() {
    CheckResult res{1, "equilibrium closed forms", false, ""};
    const Grid g(16.0, 16, 24, 1.0);
    double worst_closed = 0.0, worst_ode = 0.0;
    for (double alpha : {1.0, 2.0}) {
        const auto p = acceptance_params(alpha);
        const auto prof = build_profile(p, g);
        const double rho_b = prof.density(p.depth);
        for (std::size_t j = 0; j < g.nz; ++j) {
            const double y = g.y(j);
            const double closed = alpha == 1.0 ? std::exp(1.0 - y) : 1.0 + 0.5 * (1.0 - y);
            worst_closed = std::max(worst_closed, std::abs(prof.density_nodes()[j] - closed));
            worst_ode =
                std::max(worst_ode, std::abs(prof.density_nodes()[j] - rho_by_ode(p, rho_b, y)));
        }
    }
    res.pass = worst_closed <= 1e-10 && worst_ode <= 1e-8;
    res.detail = "closed-form gap " + fmt(worst_closed) + ", ode gap " + fmt(worst_ode);
    return res;
}

CheckResult check_trivial_residual() {
    CheckResult res{2, "trivial solution residual", false, ""};
    const Grid g(16.0, 32, 16, 1.0);
    const auto p = acceptance_params();
    const auto prof = build_profile(p, g);
    double worst = 0.0;
    for (double gamma : {0.5, 1.0, 2.0})
        worst = std::max(worst, yspace_norm(residual(State(g), Forcing::zero(gamma), p, prof), 0));
    res.pass = worst <= 1e-12;
    res.detail = "max ||Psi(0)||_Y0 over speeds = " + fmt(worst);
    return res;
}

CheckResult check_derivative(std::uint64_t seed) {
    CheckResult res{3, "derivative vs finite differences", false, ""};
    const Grid g(16.0, 32, 16, 1.0);
    const auto p = acceptance_params();
    const auto prof = build_profile(p, g);
    const Forcing forcing = Forcing::gaussian_pressure(1.0, g.L, 8.0, 1.0, 1.0, 1e-3);
    const double h = 2.5e-3;

    double worst = 0.0;
    for (int probe = 0; probe < 20; ++probe) {
        const State w0 = random_admissible(g, seed + 13 * probe, 1e-3, 5);
        const State dir = random_admissible(g, seed + 13 * probe + 7, 1.0, 5);
        const Background bg = make_background(w0, forcing, p, prof);
        const Residual analytic = derivative_apply(bg, dir);
        auto at = [&](double t) {
            State ws = w0;
            ws.add_scaled(t, dir);
            return residual(ws, forcing, p, prof);
        };
        Residual fd = at(h);
        fd.add_scaled(-1.0, at(-h));
        fd.scale(8.0);
        Residual wide = at(2.0 * h);
        wide.add_scaled(-1.0, at(-2.0 * h));
        fd.add_scaled(-1.0, wide);
        fd.scale(1.0 / (12.0 * h));
        fd.add_scaled(-1.0, analytic);
        worst = std::max(worst, yspace_norm(fd, 0) / std::max(yspace_norm(analytic, 0), 1e-300));
    }
    res.pass = worst <= 1e-6;
    res.detail = "worst relative error over 20 probes = " + fmt(worst);
    return res;
}

CheckResult check_inverse_consistency(std::uint64_t seed) {
    CheckResult res{4, "discrete right/left inverse consistency", false, ""};
    const Grid g(16.0, 32, 16, 1.0);
    const auto p = acceptance_params();
    const auto prof = build_profile(p, g);
    const Forcing forcing = Forcing::zero(1.0);

    double worst_right = 0.0, worst_left = 0.0;
    for (int which = 0; which <= 5; ++which) {
        const State w0 = which == 0 ? State(g) : random_admissible(g, seed + 31 * which, 1e-3, 5);
        const Background bg = make_background(w0, forcing, p, prof);
        for (int m : {0, 2}) {
            PrincipalOptions reg;
            if (m == 2) {
                reg.m = 2;
                reg.N = 100.0;
            }
            const AssembledOperator op = assemble(bg, reg, true);
            const DofMap& map = op.dofs();
            const Residual ry = random_data(g, seed + 97 * which + m, 1.0, 6);
            const Eigen::VectorXd y = map.pack_data(ry);
            const Eigen::VectorXd x = op.solve_vec(y);
            worst_right = std::max(worst_right, (op.apply(x) - y).norm() / y.norm());
            const Eigen::VectorXd xv = map.pack_state(map.unpack_state(x));
            const Eigen::VectorXd back = op.solve_vec(op.apply(xv));
            worst_left = std::max(worst_left, (back - xv).norm() / xv.norm());
        }
    }
    res.pass = worst_right <= 1e-8 && worst_left <= 1e-8;
    res.detail = "A(L(y)) gap " + fmt(worst_right) + ", L(A(x)) gap " + fmt(worst_left);
    return res;
}

CheckResult check_bogovskii(std::uint64_t seed) {
    CheckResult res{5, "divergence inverses", false, ""};
    const Grid g(8.0, 32, 20, 1.0);
    double worst_div = 0.0, worst_trace = 0.0, worst_sol = 0.0;
    for (int probe = 0; probe < 4; ++probe) {
        SlabField psi = random_slab(g, seed + 7 * probe, 1.0, g.nx / 4);
        const double mean = psi.integrate_vertical().mean() / g.depth;
        std::vector<double> v = psi.values();
        for (double& x : v) x -= mean;
        psi = SlabField::from_values(g, v);
        const auto B = bogovskii_zero_trace(psi);
        const SlabField div = B[0].dx() + B[1].dz();
        worst_div = std::max(worst_div, sobolev_norm(div - psi, 0) / sobolev_norm(psi, 0));
        for (const auto& comp : B) {
            worst_trace = std::max(worst_trace, linf(comp.bottom_trace().values()));
            worst_trace = std::max(worst_trace, linf(comp.top_trace().values()));
        }
    }
    for (int probe = 0; probe < 4; ++probe) {
        const SurfaceField chi = random_surface(g, seed + 501 + probe, 1.0, g.nx / 4);
        const auto B = solenoidal_extension(chi);
        const SlabField div = B[0].dx() + B[1].dz();
        worst_sol = std::max(worst_sol, sobolev_norm(div, 0));
        SurfaceField top_err = B[1].top_trace() - chi;
        worst_sol = std::max(worst_sol, sobolev_norm(top_err, 0.0));
        worst_sol = std::max(worst_sol, linf(B[0].top_trace().values()));
        worst_sol = std::max(worst_sol, linf(B[0].bottom_trace().values()));
        worst_sol = std::max(worst_sol, linf(B[1].bottom_trace().values()));
    }
    res.pass = worst_div <= 1e-8 && worst_trace <= 1e-10 && worst_sol <= 1e-10;
    res.detail = "divergence gap " + fmt(worst_div) + ", trace " + fmt(worst_trace) +
                 ", solenoidal " + fmt(worst_sol);
    return res;
}

CheckResult check_smoothing(std::uint64_t seed) {
    CheckResult res{6, "smoothing and Littlewood-Paley axioms", false, ""};
    const Grid g(4.0, 64, 10, 1.0);
    std::mt19937_64 rng(seed);
    bool ok = true;
    const double slack = 1.0 + 1e-12;
    double worst_lp = 0.0;
    for (int sample = 0; sample < 1000 && ok; ++sample) {
        const SurfaceField f = random_surface(g, rng(), 1.0, 31);
        const int j = 1 + sample % 4;
        const double s = sample % 3;
        const double t = s + 1 + sample % 2;
        const SurfaceField sf = smooth_cutoff(f, j);
        const SurfaceField rf = f - sf;
        const SurfaceField df = lp_block(f, j);
        ok = ok && sobolev_norm(sf, s) <= slack * sobolev_norm(f, s);
        ok = ok && sobolev_norm(sf, t) <= slack * std::pow(2.0, 0.5 * (t - s)) *
                                              std::ldexp(1.0, j * int(t - s)) * sobolev_norm(sf, s);
        ok = ok && sobolev_norm(rf, s) <=
                       slack * std::ldexp(1.0, -j * int(t - s)) * sobolev_norm(rf, t);
        ok = ok && sobolev_norm(df, t) <= slack * std::pow(5.0, 0.5 * (t - s)) *
                                              std::ldexp(1.0, j * int(t - s)) * sobolev_norm(df, s);
        ok = ok && sobolev_norm(df, s) <=
                       slack * std::ldexp(1.0, -j * int(t - s)) * sobolev_norm(df, t);
        if (sample < 50) {
            double sum = 0.0;
            for (int jj = 0; jj <= 6; ++jj) {
                const double nj = sobolev_norm(lp_block(f, jj), s);
                sum += nj * nj;
            }
            const double whole = sobolev_norm(f, s);
            worst_lp = std::max(worst_lp, std::abs(sum - whole * whole) /
                                              std::max(whole * whole, 1e-300));
        }
    }
    res.pass = ok && worst_lp <= 1e-12;
    res.detail = std::string(ok ? "axioms hold on 1000 samples" : "axiom violation") +
                 ", LP identity gap " + fmt(worst_lp);
    return res;
}

CheckResult check_engine_bookkeeping(std::uint64_t seed) {
    CheckResult res{7, "iteration engine bookkeeping", false, ""};
    double worst = 0.0;

    {  // scalar toy with one derivative of loss
        const Grid g(8.0, 64, 8, 1.0);
        nm::BanachScaleSpec<SurfaceField, SurfaceField> sc;
        sc.norm_x = [](const SurfaceField& f, int s) { return sobolev_norm(f, double(s)); };
        sc.norm_y = sc.norm_x;
        sc.smooth_x = [](const SurfaceField& f, int j) {
            return j == 0 ? SurfaceField(f.grid()) : smooth_cutoff(f, j);
        };
        sc.smooth_y = sc.smooth_x;
        sc.block_y = [](const SurfaceField& f, int j) { return lp_block(f, j); };
        nm::ProblemSpec<SurfaceField, SurfaceField> prob;
        prob.map = [](const SurfaceField& u) {
            SurfaceField quad = pointwise(u, u);
            quad *= 0.5;
            return u + quad.derivative();
        };
        prob.inverse = [](const SurfaceField& v, const SurfaceField& f) {
            // dense solve of h + d1(v h) = f over mode dofs
            const Grid& gg = v.grid();
            const std::size_t n = gg.nx - 1;
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
                std::vector<Complex> spec(gg.nx / 2 + 1, 0.0);
                for (std::size_t md = 0; md < n; ++md) {
                    const std::size_t k = (md + 1) / 2;
                    const Complex unit =
                        md == 0 ? Complex(1, 0)
                                : (md % 2 == 1 ? Complex(0.5, 0) : Complex(0, -0.5));
                    spec[k] += unit * x[md];
                }
                return SurfaceField::from_spectrum(gg, spec);
            };
            Eigen::MatrixXd A(n, n);
            for (std::size_t j = 0; j < n; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
                e[j] = 1.0;
                const SurfaceField basis = unpack(e);
                A.col(j) = pack(basis + pointwise(v, basis).derivative());
            }
            return unpack(A.partialPivLu().solve(pack(f)));
        };
        prob.base_index = 2;
        prob.top_index = 12;
        const SurfaceField gdat = random_surface(g, seed + 5, 1e-3, 20);

        std::vector<nm::IterationState<SurfaceField, SurfaceField>> hist;
        hist.push_back(nm::seed(prob, sc, gdat, SurfaceField(g)));
        for (int j = 1; j <= 5; ++j) hist.push_back(nm::step(prob, sc, gdat, hist.back()));

        // seed identities
        worst = std::max(worst, sobolev_norm(hist[0].f - lp_block(gdat, 0), 0.0));
        worst = std::max(worst, sobolev_norm(hist[0].f - smooth_cutoff(gdat, 1), 0.0));
        // recursive identity, telescoping, partial sums
        for (int j = 2; j <= 5; ++j) {
            SurfaceField acc(g);
            for (int nn = 0; nn + 2 <= j; ++nn) acc += hist[nn].e;
            SurfaceField expect = smooth_cutoff(hist[j - 1].e, j);
            expect += lp_block(acc, j - 1);
            expect *= -1.0;
            worst = std::max(worst, sobolev_norm(expect - hist[j].y, 0.0));
        }
        for (int j = 1; j <= 5; ++j) {
            SurfaceField acc(g);
            for (int nn = 0; nn < j; ++nn) acc += hist[nn].h;
            worst = std::max(worst, sobolev_norm(acc - hist[j].u, 0.0));
            SurfaceField ys(g), es(g);
            for (int nn = 0; nn <= j; ++nn) ys += hist[nn].y;
            for (int nn = 0; nn < j; ++nn) es += hist[nn].e;
            SurfaceField rhs = smooth_cutoff(es, j);
            rhs *= -1.0;
            worst = std::max(worst, sobolev_norm(ys - rhs, 0.0));
        }
    }

    {  // the traveling-wave problem
        const Grid g(16.0, 32, 16, 1.0);
        const auto p = acceptance_params();
        const auto prof = build_profile(p, g);
        const Forcing forcing = Forcing::gaussian_pressure(1.0, g.L, 8.0, 1.0, 1.0, 1e-3);
        const TravelingWaveProblem tw(g, p, prof, forcing);
        const auto prob = tw.problem();
        const auto sc = tw.scales();
        const Residual gdat = tw.target();
        std::vector<nm::IterationState<State, Residual>> hist;
        hist.push_back(nm::seed(prob, sc, gdat, tw.zero_state()));
        for (int j = 1; j <= 3; ++j) hist.push_back(nm::step(prob, sc, gdat, hist.back()));
        Residual y1 = smooth_cutoff(hist[0].e, 1);
        y1.scale(-1.0);
        worst = std::max(worst, yspace_norm(y1 - hist[1].y, 0));
        for (int j = 2; j <= 3; ++j) {
            Residual acc(g);
            for (int nn = 0; nn + 2 <= j; ++nn) acc.add_scaled(1.0, hist[nn].e);
            Residual expect = smooth_cutoff(hist[j - 1].e, j);
            expect.add_scaled(1.0, lp_block(acc, j - 1));
            expect.scale(-1.0);
            worst = std::max(worst, yspace_norm(expect - hist[j].y, 0));
        }
        for (int j = 1; j <= 3; ++j) {
            State acc(g);
            for (int nn = 0; nn < j; ++nn) acc.add_scaled(1.0, hist[nn].h);
            worst = std::max(worst, xspace_norm(acc - hist[j].u, 0));
        }
    }

    res.pass = worst <= 1e-12;
    res.detail = "worst identity gap = " + fmt(worst);
    return res;
}

struct WaveRun {
    SolveOutcome newton;
    SolveOutcome nash;
    double agreement = 0.0;
    double eta_peak = 0.0;
    double imbalance = 0.0;
    double margin_low = 0.0;
    double decay = 0.0;
    bool pass(double residual_tol) const {
        return newton.report.converged && nash.report.converged &&
               newton.residual_norm <= residual_tol && nash.residual_norm <= residual_tol &&
               agreement <= 1e-8 && eta_peak > 0.0 && imbalance <= 1e-6 && margin_low > 0.0 &&
               decay <= 0.1;
    }
};

WaveRun run_wave(double gamma, const State* warm_newton) {
    const Grid g(16.0, 64, 24, 1.0);
    const auto p = acceptance_params();
    const auto prof = build_profile(p, g);
    const double cx = 8.0;
    const Forcing forcing = Forcing::gaussian_pressure(gamma, g.L, cx, 1.0, 1.0, 1e-3);
    const TravelingWaveProblem tw(g, p, prof, forcing);
    nm::Stopping stop;
    stop.max_steps = 20;
    stop.residual_tol = 2e-10;
    const double anchor = cx + g.L / 2 + 1.0;

    WaveRun run;
    run.newton = solve_traveling_wave_anchored(tw, stop, false, anchor, warm_newton);
    run.nash = solve_traveling_wave_anchored(tw, stop, true, anchor, warm_newton);

    // compare in a common gauge: the mean-zero parts plus the volume shifts
    State da = run.newton.solution;
    State db = run.nash.solution;
    auto strip = [&](State& w, double t) {
        std::vector<double> v = w.eta.values();
        for (double& x : v) x -= t;
        w.eta = SurfaceField::from_values(g, std::move(v));
    };
    strip(da, run.newton.volume_shift);
    strip(db, run.nash.volume_shift);
    run.agreement = xspace_norm(da - db, 0) +
                    std::abs(run.newton.volume_shift - run.nash.volume_shift);

    for (double v : run.newton.solution.eta.values())
        run.eta_peak = std::max(run.eta_peak, std::abs(v));
    run.imbalance = power_balance(run.newton.solution, forcing, p, prof).imbalance;
    const auto sane = sanity_suite(run.newton.solution, p, prof, cx);
    run.margin_low = std::min(sane.vacuum_margin_low, sane.vacuum_margin_high);
    const std::size_t far =
        static_cast<std::size_t>(std::llround((cx + g.L / 2) / g.L * g.nx)) % g.nx;
    run.decay = std::abs(run.newton.solution.eta.value(far)) / run.eta_peak;
    return run;
}

CheckResult check_traveling_wave() {
    CheckResult res{8, "end-to-end traveling wave", false, ""};
    const WaveRun run = run_wave(1.0, nullptr);
    res.pass = run.pass(1e-9);
    res.detail = "newton " + fmt(run.newton.residual_norm) + " in " +
                 std::to_string(run.newton.report.steps) + " steps, nash-moser " +
                 fmt(run.nash.residual_norm) + " in " + std::to_string(run.nash.report.steps) +
                 " steps, agreement " + fmt(run.agreement) + ", imbalance " +
                 fmt(run.imbalance) + ", decay " + fmt(run.decay);
    return res;
}

CheckResult check_trivial_uniqueness(std::uint64_t seed) {
    CheckResult res{9, "trivial-solution uniqueness", false, ""};
    const Grid g(16.0, 32, 16, 1.0);
    const auto p = acceptance_params();
    const auto prof = build_profile(p, g);
    const TravelingWaveProblem tw(g, p, prof, Forcing::zero(1.0));
    nm::Stopping stop;
    stop.max_steps = 20;
    stop.residual_tol = 1e-13;

    State w = random_admissible(g, seed + 77, 1.0, 5);
    const double n0 = xspace_norm(w, 0);
    w.scale(1e-3 / n0);  // exact X-norm 1e-3 seed
    const SolveOutcome out = solve_traveling_wave(tw, stop, false, &w);
    const double final_norm = xspace_norm(out.solution, 0);
    res.pass = final_norm <= 1e-10;
    res.detail = "final state norm = " + fmt(final_norm) + " from seed norm 1e-3";
    return res;
}

CheckResult check_gamma_sweep() {
    CheckResult res{10, "wave-speed sweep", false, ""};
    std::vector<SolveOutcome> runs;
    runs.reserve(3);
    bool all_pass = true;
    std::string detail;
    const State* warm = nullptr;
    for (double gamma : {0.5, 1.0, 2.0}) {
        const WaveRun run = run_wave(gamma, warm);
        all_pass = all_pass && run.pass(1e-9);
        runs.push_back(run.newton);
        warm = &runs.back().solution;
        detail += "gamma " + fmt(gamma) + ": res " + fmt(run.newton.residual_norm) +
                  " imbalance " + fmt(run.imbalance) + "; ";
    }
    double min_dist = 1e300;
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            const SurfaceField diff = runs[i].solution.eta - runs[j].solution.eta;
            const double rel = sobolev_norm(diff, 0.0) /
                               std::max(sobolev_norm(runs[i].solution.eta, 0.0), 1e-300);
            min_dist = std::min(min_dist, rel);
        }
    res.pass = all_pass && min_dist >= 1e-3;
    res.detail = detail + "min pairwise relative distance " + fmt(min_dist);
    return res;
}

}  // namespace

std::vector<CheckResult> verify_identities(std::uint64_t seed) {
    return {check_equilibrium_closed_forms(), check_trivial_residual(), check_bogovskii(seed),
            check_smoothing(seed)};
}

std::vector<CheckResult> verify_linear(std::uint64_t seed) {
    return {check_derivative(seed), check_inverse_consistency(seed),
            check_engine_bookkeeping(seed)};
}

std::vector<CheckResult> verify_solves(std::uint64_t seed) {
    return {check_traveling_wave(), check_trivial_uniqueness(seed), check_gamma_sweep()};
}

std::vector<CheckResult> verify_all(std::uint64_t seed) {
    std::vector<CheckResult> all = verify_identities(seed);
    for (auto& r : verify_linear(seed)) all.push_back(std::move(r));
    for (auto& r : verify_solves(seed)) all.push_back(std::move(r));
    return all;
}

}  // namespace strata
