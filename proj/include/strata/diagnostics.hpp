#pragma once

#include "strata/linear.hpp"
#include "strata/state.hpp"

namespace strata {

// Dissipation-power bookkeeping: the weighted viscous dissipation on one
// side, the work done by the data (or by a residual triple) on the other.
struct BalanceReport {
    double dissipation = 0.0;     // integral of the viscous dissipation density
    double bulk_work = 0.0;       // momentum data paired with u
    double pressure_work = 0.0;   // continuity data paired with kinetic + enthalpy head
    double gravity_work = 0.0;    // fractional-multiplier surface pairing
    double surface_work = 0.0;    // boundary data paired with M^{-1} u
    double rhs_total = 0.0;
    double imbalance = 0.0;       // |lhs - rhs| / max(|lhs|, |rhs|, tiny)
};

// identity for a state together with the residual triple it produces
BalanceReport power_balance(const State& w, const Residual& data, double gamma,
                            const PhysicalParams& params, const EquilibriumProfile& profile);

// identity for an exact solution driven by stress/force data
BalanceReport power_balance(const State& w, const Forcing& forcing, const PhysicalParams& params,
                            const EquilibriumProfile& profile);

// background-adapted solution norm: the solution scale norm plus the
// transported-enthalpy term that encodes the derivative loss
double adapted_norm(const State& w, const Background& bg, int s);

struct SanityReport {
    double vacuum_margin_low = 0.0;   // min over nodes of arg - H_min (inf if unbounded)
    double vacuum_margin_high = 0.0;  // min over nodes of H_max - arg
    double min_jacobian = 0.0;
    bool diffeomorphic = false;
    double korn_ratio = 0.0;          // ||u||_{H^1} / ||D u||_{L^2}
    double decay_ratio = 0.0;         // |eta| at distance L/2 from center over peak
    double div_compat_ratio = 0.0;    // H^-1 mass of the column flux over its L^2 size
};

SanityReport sanity_suite(const State& w, const PhysicalParams& params,
                          const EquilibriumProfile& profile, double forcing_center_x);

}  // namespace strata
