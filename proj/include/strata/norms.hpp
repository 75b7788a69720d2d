#pragma once

#include "strata/field.hpp"
#include "strata/state.hpp"

namespace strata {

// Discrete norms over the periodic slab.  Frequencies enter as xi = k / L
// (matching the unitary Fourier convention in which derivatives carry a
// factor 2 pi), horizontal weights are <xi>^2 = 1 + |xi|^2, and vertical
// integrals use Clenshaw-Curtis quadrature.

// L^2(0,L) and H^s norms of surface fields; s may be any real >= 0.
double sobolev_norm(const SurfaceField& f, double s);

// H^s(Omega) for integer s >= 0: sum over vertical derivative orders c of
// the mixed weight <xi>^{2(s-c)} applied to d^c/dy^c f.
double sobolev_norm(const SlabField& f, int s);

// Anisotropic surface norm: low-frequency weight |xi|^{-2} (xi_1^2 + |xi|^4)
// inside |xi| < kappa, <xi>^{2s} outside; the zero mode is excluded and the
// field must be mean-free.
double anisotropic_norm(const SurfaceField& eta, double s);
double anisotropic_norm(const Surface2Field& eta, double s);

// algebra exponent r_d of the band-limited product estimate
int anisotropic_algebra_power(int d);

// Sharp frequency projectors Pi_L / Pi_H at threshold kappa (|xi| < kappa
// retained by the low part).
SurfaceField project_low(const SurfaceField& f, double kappa);
SurfaceField project_high(const SurfaceField& f, double kappa);
SlabField project_low(const SlabField& f, double kappa);
SlabField project_high(const SlabField& f, double kappa);

// smoothing operator S_j = sharp cutoff at |xi| < 2^j (j >= 0)
SurfaceField smooth_cutoff(const SurfaceField& f, int j);
SlabField smooth_cutoff(const SlabField& f, int j);
// Littlewood-Paley block: Delta_j = S_{j+1} - S_j with the S_0 = 0 convention,
// so Delta_0 = S_1 and Delta_j carves the annulus 2^j <= |xi| < 2^{j+1}.
SurfaceField lp_block(const SurfaceField& f, int j);
SlabField lp_block(const SlabField& f, int j);

// homogeneous H^-1 seminorm (mean-free surface fields)
double hminus1_seminorm(const SurfaceField& f);
double hminus1_seminorm(const Surface2Field& f);

// H-hat norm: sobolev_norm plus the H^-1 seminorm of the vertical integral
double hhat_norm(const SlabField& g, int s);

// Solution / data scale norms.
double xspace_norm(const State& w, int s);
double yspace_norm(const Residual& r, int s);

struct ConstraintReport {
    double bottom_violation = 0.0;     // || Tr_{y=0} u ||_{H^{1/2}}
    double kinematic_violation = 0.0;  // || Tr_{y=b}(u.e_n) + d_1 eta ||_{H^{1/2}}
    bool admissible(double tol = 1e-10) const {
        return bottom_violation <= tol && kinematic_violation <= tol;
    }
};
ConstraintReport xspace_constraints(const State& w);

// smoothing / LP operators extended componentwise to the solution and data
// triples (the scales the iteration engine runs on)
State smooth_cutoff(const State& w, int j);
State lp_block(const State& w, int j);
Residual smooth_cutoff(const Residual& r, int j);
Residual lp_block(const Residual& r, int j);

}  // namespace strata
