#pragma once

// Generic Nash-Moser iteration over abstract Banach scales, plus a plain
// Newton fallback.  The element types supply vector-space operations through
// static zero_like / add_scaled / scale members; norms, smoothing operators,
// and Littlewood-Paley blocks arrive as callbacks, and the linearization is
// consumed solely through the map / right-inverse pair.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace strata::nm {

template <class VX, class VY>
struct BanachScaleSpec {
    std::function<double(const VX&, int)> norm_x;
    std::function<double(const VY&, int)> norm_y;
    // S_j with the engine convention S_0 = 0 and S_j a cutoff at 2^j
    std::function<VX(const VX&, int)> smooth_x;
    std::function<VY(const VY&, int)> smooth_y;
    std::function<VY(const VY&, int)> block_y;  // Delta_j = S_{j+1} - S_j
};

template <class VX, class VY>
struct ProblemSpec {
    std::function<VY(const VX&)> map;                        // Psi (Psi(0) = 0)
    std::function<VX(const VX&, const VY&)> inverse;         // L(v) f
    int loss_order = 1;                                      // mu
    int base_index = 4;                                      // r
    int top_index = 20;                                      // R
    int beta() const { return 2 * (base_index + loss_order) + 1; }
};

struct Stopping {
    int max_steps = 20;
    double residual_tol = 1e-10;
    double norm_budget = 1e6;  // divergence guard on the iterate norm
    // norm index for the residual test and the budget guard; discrete scale
    // norms are equivalent, and the low indices stay clear of the roundoff
    // amplification that repeated vertical differentiation brings
    int monitor_index = 0;
};

// One iteration frame: the sextuple plus the running sums the recursions
// need.
template <class VX, class VY>
struct IterationState {
    int j = 0;
    VX u, v, h;
    VY y, f, e;
    VY sum_e, sum_y;
};

struct StepRecord {
    int j = 0;
    double residual = 0.0;       // || Psi(u_j) - g || at the monitor index
    double xi = 0.0;             // ||g|| 2^{-j} + ||Delta_j g||
    std::vector<double> h_norms; // per requested index
};

struct RunReport {
    bool converged = false;
    std::string stop_reason;
    std::vector<StepRecord> history;
    std::vector<int> slope_indices;
    std::vector<double> h_slopes;  // fitted log2 ||h_j|| decay per index
    double final_residual = 0.0;
    int steps = 0;
};

namespace detail {

inline double fit_slope(const std::vector<double>& logs) {
    // least-squares slope of logs against 0..n-1
    const std::size_t n = logs.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += i;
        sy += logs[i];
        sxx += double(i) * i;
        sxy += i * logs[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace detail

template <class VX, class VY>
IterationState<VX, VY> seed(const ProblemSpec<VX, VY>& prob, const BanachScaleSpec<VX, VY>& sc,
                            const VY& g, const VX& zero_x) {
    IterationState<VX, VY> st;
    st.j = 0;
    st.u = zero_x;
    st.v = zero_x;                     // S_0 u_0 = 0
    st.y = VY::zero_like(g);
    st.f = sc.block_y(g, 0);           // Delta_0 g = S_1 g
    st.h = prob.inverse(st.u, st.f);   // L(0) S_1 g
    VY psi_h = prob.map(st.h);
    psi_h.add_scaled(-1.0, prob.map(st.u));
    psi_h.add_scaled(-1.0, st.f);
    st.e = psi_h;                      // Psi(h_0) - Psi(0) - f_0
    st.sum_e = st.e;
    st.sum_y = st.y;
    return st;
}

template <class VX, class VY>
IterationState<VX, VY> step(const ProblemSpec<VX, VY>& prob, const BanachScaleSpec<VX, VY>& sc,
                            const VY& g, const IterationState<VX, VY>& prev) {
    IterationState<VX, VY> st;
    st.j = prev.j + 1;
    st.u = prev.u;
    st.u.add_scaled(1.0, prev.h);            // u_j = u_{j-1} + h_{j-1}
    st.v = sc.smooth_x(st.u, st.j);          // v_j = S_j u_j
    st.y = sc.smooth_y(prev.sum_e, st.j);    // y_j = -S_j sum e_n - sum y_n
    st.y.scale(-1.0);
    st.y.add_scaled(-1.0, prev.sum_y);
    st.f = sc.block_y(g, st.j);              // f_j = Delta_j g + y_j
    st.f.add_scaled(1.0, st.y);
    st.h = prob.inverse(st.v, st.f);         // h_j = L(v_j) f_j
    VX shifted = st.u;
    shifted.add_scaled(1.0, st.h);
    st.e = prob.map(shifted);                // e_j = Psi(u_j + h_j) - Psi(u_j) - f_j
    st.e.add_scaled(-1.0, prob.map(st.u));
    st.e.add_scaled(-1.0, st.f);
    st.sum_e = prev.sum_e;
    st.sum_e.add_scaled(1.0, st.e);
    st.sum_y = prev.sum_y;
    st.sum_y.add_scaled(1.0, st.y);
    return st;
}

// Nash-Moser run: returns the solution candidate and a report with the
// tame-decay probe (log2 ||h_j||_{E^s} slopes per requested index).
template <class VX, class VY>
VX run(const ProblemSpec<VX, VY>& prob, const BanachScaleSpec<VX, VY>& sc, const VY& g,
       const Stopping& stop, const VX& zero_x, RunReport* report = nullptr,
       std::vector<IterationState<VX, VY>>* history = nullptr) {
    RunReport rep;
    rep.slope_indices = {0, 1, 2};
    std::vector<std::vector<double>> hlogs(rep.slope_indices.size());

    const double gnorm = sc.norm_y(g, stop.monitor_index);
    IterationState<VX, VY> st = seed(prob, sc, g, zero_x);
    if (history) history->push_back(st);

    double best = std::numeric_limits<double>::infinity();
    int worse_steps = 0;
    VX solution = zero_x;
    for (int j = 0;; ++j) {
        // residual of the accumulated iterate u_{j+1} = u_j + h_j
        VX next = st.u;
        next.add_scaled(1.0, st.h);
        VY res = prob.map(next);
        res.add_scaled(-1.0, g);
        const double rnorm = sc.norm_y(res, stop.monitor_index);

        StepRecord rec;
        rec.j = j;
        rec.residual = rnorm;
        rec.xi = gnorm * std::ldexp(1.0, -j) + sc.norm_y(sc.block_y(g, j), stop.monitor_index);
        for (std::size_t i = 0; i < rep.slope_indices.size(); ++i) {
            const double hn = sc.norm_x(st.h, rep.slope_indices[i]);
            rec.h_norms.push_back(hn);
            if (hn > 0.0) hlogs[i].push_back(std::log2(hn));
        }
        rep.history.push_back(rec);

        if (rnorm <= stop.residual_tol) {
            solution = next;
            rep.converged = true;
            rep.stop_reason = "residual below tolerance";
            rep.final_residual = rnorm;
            rep.steps = j + 1;
            break;
        }
        if (sc.norm_x(next, stop.monitor_index) > stop.norm_budget) {
            solution = next;
            rep.stop_reason = "norm budget exceeded";
            rep.final_residual = rnorm;
            rep.steps = j + 1;
            break;
        }
        // monotone-residual policy: tolerate three warm-up increases
        if (rnorm < best) {
            best = rnorm;
            worse_steps = 0;
        } else if (++worse_steps > 3) {
            solution = next;
            rep.stop_reason = "residual stopped decreasing";
            rep.final_residual = rnorm;
            rep.steps = j + 1;
            break;
        }
        if (j + 1 >= stop.max_steps) {
            solution = next;
            rep.stop_reason = "step budget exhausted";
            rep.final_residual = rnorm;
            rep.steps = j + 1;
            break;
        }
        st = step(prob, sc, g, st);
        if (history) history->push_back(st);
    }

    for (std::size_t i = 0; i < rep.slope_indices.size(); ++i) rep.h_slopes.push_back(detail::fit_slope(hlogs[i]));
    if (report) *report = rep;
    return solution;
}

// plain Newton iteration with the same callbacks (no smoothing)
template <class VX, class VY>
VX newton_run(const ProblemSpec<VX, VY>& prob, const BanachScaleSpec<VX, VY>& sc, const VY& g,
              const Stopping& stop, const VX& zero_x, RunReport* report = nullptr) {
    RunReport rep;
    VX u = zero_x;
    double best = std::numeric_limits<double>::infinity();
    int worse_steps = 0;
    for (int j = 0; j < stop.max_steps; ++j) {
        VY res = prob.map(u);
        res.add_scaled(-1.0, g);
        const double rnorm = sc.norm_y(res, stop.monitor_index);
        StepRecord rec;
        rec.j = j;
        rec.residual = rnorm;
        rep.history.push_back(rec);
        rep.final_residual = rnorm;
        rep.steps = j;
        if (rnorm <= stop.residual_tol) {
            rep.converged = true;
            rep.stop_reason = "residual below tolerance";
            break;
        }
        if (rnorm < best) {
            best = rnorm;
            worse_steps = 0;
        } else if (++worse_steps > 3) {
            rep.stop_reason = "residual stopped decreasing";
            break;
        }
        if (sc.norm_x(u, stop.monitor_index) > stop.norm_budget) {
            rep.stop_reason = "norm budget exceeded";
            break;
        }
        res.scale(-1.0);
        u.add_scaled(1.0, prob.inverse(u, res));
        rep.stop_reason = "step budget exhausted";
    }
    if (report) *report = rep;
    return u;
}

}  // namespace strata::nm
