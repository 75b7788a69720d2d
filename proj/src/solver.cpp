#include "strata/solver.hpp"

#include <cmath>

#include "strata/norms.hpp"

namespace strata {

TravelingWaveProblem::TravelingWaveProblem(const Grid& grid, const PhysicalParams& params,
                                           const EquilibriumProfile& profile,
                                           const Forcing& forcing)
    : grid_(grid), params_(params), profile_(profile), forcing_(forcing) {
    base_ = residual(State(grid), forcing, params, profile);
    target_ = Residual(grid);
    target_.add_scaled(-1.0, base_);
    pre_ = std::make_shared<ModeBlockOperator>(grid, params, profile, forcing.gamma);
}

Residual TravelingWaveProblem::operator_residual(const State& w) const {
    return residual(w, forcing_, params_, profile_);
}

nm::ProblemSpec<State, Residual> TravelingWaveProblem::problem() const {
    nm::ProblemSpec<State, Residual> spec;
    // indices from the traveling-wave verification: mu = 1, r = 3 + n/2,
    // R = 17 + 3 n/2 (n = 2)
    spec.loss_order = 1;
    spec.base_index = 4;
    spec.top_index = 20;
    const auto params = params_;
    const auto profile = profile_;
    const auto forcing = forcing_;
    const auto base = base_;
    const auto pre = pre_;
    spec.map = [=](const State& w) {
        Residual r = residual(w, forcing, params, profile);
        r.add_scaled(-1.0, base);
        return r;
    };
    spec.inverse = [=](const State& v, const Residual& f) {
        const Background bg = make_background(v, forcing, params, profile);
        const DerivativeSolver solver(bg, pre);
        return solver.solve(f);
    };
    return spec;
}

nm::BanachScaleSpec<State, Residual> TravelingWaveProblem::scales() const {
    nm::BanachScaleSpec<State, Residual> sc;
    sc.norm_x = [](const State& w, int s) { return xspace_norm(w, s); };
    sc.norm_y = [](const Residual& r, int s) { return yspace_norm(r, s); };
    sc.smooth_x = [](const State& w, int j) {
        return j == 0 ? State(w.grid()) : smooth_cutoff(w, j);
    };
    sc.smooth_y = [](const Residual& r, int j) {
        return j == 0 ? Residual(r.grid()) : smooth_cutoff(r, j);
    };
    sc.block_y = [](const Residual& r, int j) { return lp_block(r, j); };
    return sc;
}

namespace {

// constant surface lift: (0, 0, t) is an exact solution of the homogeneous
// system (it relabels the quiescent depth), so it serves as a volume gauge
State lift_volume(const State& w, double t) {
    if (t == 0.0) return w;
    State out = w;
    std::vector<double> v = w.eta.values();
    for (double& x : v) x += t;
    out.eta = SurfaceField::from_values(w.grid(), std::move(v));
    return out;
}

// solve at a fixed volume offset, optionally warm-started; the returned
// solution carries the lift
SolveOutcome solve_at_volume(const TravelingWaveProblem& tw, const nm::Stopping& stop,
                             bool nash_moser, double t, const State* warm_start) {
    auto spec = tw.problem();
    const auto scales = tw.scales();
    const Grid& g = tw.grid();

    State shift = State(g);
    if (warm_start != nullptr) {
        shift = kinematic_project(*warm_start);
        // fold any volume offset the warm start carries into the gauge
        // parameter so the internal iterates stay mean-free
        const double m = shift.eta.mean();
        if (m != 0.0) {
            std::vector<double> v = shift.eta.values();
            for (double& x : v) x -= m;
            shift.eta = SurfaceField::from_values(g, std::move(v));
            t += m;
        }
    }
    // translate so that the effective iterate is t-lifted and warm-shifted:
    // map(x) = Psi(lift(shift + x, t)) - Psi(lift(shift, t))
    const Residual at_origin = tw.operator_residual(lift_volume(shift, t));
    spec.map = [&tw, shift, t, at_origin](const State& x) {
        State w = shift;
        w.add_scaled(1.0, x);
        Residual r = tw.operator_residual(lift_volume(w, t));
        r.add_scaled(-1.0, at_origin);
        return r;
    };
    auto raw_inverse = tw.problem().inverse;
    spec.inverse = [raw_inverse, shift, t](const State& v, const Residual& f) {
        State w = shift;
        w.add_scaled(1.0, v);
        return raw_inverse(lift_volume(w, t), f);
    };
    Residual target(g);
    target.add_scaled(-1.0, at_origin);

    SolveOutcome out;
    State sol = nash_moser ? nm::run(spec, scales, target, stop, State(g), &out.report)
                           : nm::newton_run(spec, scales, target, stop, State(g), &out.report);
    out.solution = lift_volume(shift, t);
    out.solution.add_scaled(1.0, sol);
    out.volume_shift = t;
    out.residual_norm = yspace_norm(tw.operator_residual(out.solution), 0);
    return out;
}

}  // namespace

SolveOutcome solve_traveling_wave(const TravelingWaveProblem& tw, const nm::Stopping& stop,
                                  bool nash_moser, const State* warm_start) {
    return solve_at_volume(tw, stop, nash_moser, 0.0, warm_start);
}

SolveOutcome solve_traveling_wave_anchored(const TravelingWaveProblem& tw,
                                           const nm::Stopping& stop, bool nash_moser,
                                           double anchor_x, const State* warm_start) {
    const Grid& g = tw.grid();
    const std::size_t ix_anchor =
        static_cast<std::size_t>(std::llround(anchor_x / g.L * g.nx)) % g.nx;

    double t = 0.0;
    SolveOutcome out;
    State warm = warm_start ? *warm_start : State(g);
    bool have_warm = warm_start != nullptr;
    int total_steps = 0;
    for (int outer = 0; outer < 4; ++outer) {
        out = solve_at_volume(tw, stop, nash_moser, t, have_warm ? &warm : nullptr);
        total_steps += out.report.steps;
        out.report.steps = total_steps;
        const double value = out.solution.eta.value(ix_anchor);
        double peak = 1e-300;
        for (double v : out.solution.eta.values()) peak = std::max(peak, std::abs(v));
        if (std::abs(value) <= std::max(1e-12, 1e-8 * peak)) break;
        // strip the lift this solve carried; the warm start is the internal
        // mean-zero state
        warm = out.solution;
        {
            std::vector<double> v = warm.eta.values();
            for (double& x : v) x -= out.volume_shift;
            warm.eta = SurfaceField::from_values(g, std::move(v));
        }
        have_warm = true;
        // eta(anchor) responds to the volume parameter with slope 1 + O(w)
        t -= value;
    }
    return out;
}

}  // namespace strata
