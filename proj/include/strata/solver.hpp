#pragma once

#include <memory>

#include "strata/linear.hpp"
#include "strata/nashmoser.hpp"
#include "strata/operators.hpp"

namespace strata {

// Traveling-wave problem wired for the iteration engine: the map is the
// residual shifted so the origin is a root of the homogeneous problem, the
// target carries the forcing, and the inverse is the preconditioned direct
// solve of the full linearization.
class TravelingWaveProblem {
  public:
    TravelingWaveProblem(const Grid& grid, const PhysicalParams& params,
                         const EquilibriumProfile& profile, const Forcing& forcing);

    nm::ProblemSpec<State, Residual> problem() const;
    nm::BanachScaleSpec<State, Residual> scales() const;
    Residual target() const { return target_; }
    State zero_state() const { return State(grid_); }
    const Grid& grid() const { return grid_; }
    const EquilibriumProfile& profile() const { return profile_; }
    const PhysicalParams& params() const { return params_; }
    const Forcing& forcing() const { return forcing_; }

    // residual of the untranslated operator at a state
    Residual operator_residual(const State& w) const;

  private:
    Grid grid_;
    PhysicalParams params_;
    EquilibriumProfile profile_;
    Forcing forcing_;
    Residual base_;    // residual at the trivial state (pure forcing content)
    Residual target_;  // -base_
    std::shared_ptr<ModeBlockOperator> pre_;
};

struct SolveOutcome {
    State solution;
    nm::RunReport report;
    double residual_norm = 0.0;  // || Psi-bar (solution) ||_{Y^0}
    double volume_shift = 0.0;   // anchored-gauge offset carried by eta
};

// method: plain Newton or the smoothing iteration; warm_start, when given,
// seeds the iteration after projection onto the constraint space
SolveOutcome solve_traveling_wave(const TravelingWaveProblem& tw, const nm::Stopping& stop,
                                  bool nash_moser, const State* warm_start = nullptr);

// The periodic box carries an exact one-parameter solution family
// (eta -> eta + c relabels the quiescent depth), so the mean-zero gauge of
// the surface spaces spreads the displaced volume into a flat counter-
// elevation of size O(1/L).  The anchored solve continues in that volume
// parameter until the surface vanishes at the anchor point - the periodic
// proxy for decay at infinity.  anchor_x defaults to the antipode of the
// forcing center.
SolveOutcome solve_traveling_wave_anchored(const TravelingWaveProblem& tw,
                                           const nm::Stopping& stop, bool nash_moser,
                                           double anchor_x, const State* warm_start = nullptr);

}  // namespace strata
