#pragma once

// Dealiased evaluation pipeline shared by the nonlinear operator, its
// analytic linearization, and the principal part.  All pointwise work
// happens as raw value arrays on the 3/2-refined grid; horizontal
// derivatives are spectral, vertical derivatives use the Chebyshev matrix,
// and results are restricted back to the base band at the very end.

#include <vector>

#include "strata/equilibrium.hpp"
#include "strata/forcing.hpp"
#include "strata/geometry.hpp"
#include "strata/state.hpp"

namespace strata::pipeline {

using Vec = std::vector<double>;

// raw helpers on z-major slab arrays over a given grid
Vec dx_slab(const Grid& g, const Vec& v);
Vec dz_slab(const Grid& g, const Vec& v);
Vec dx_surface(const Grid& g, const Vec& v);
Vec mul(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(double s, const Vec& a);
Vec replicate_rows(const Grid& g, const Vec& surface);  // constant-in-y lift
Vec top_row(const Grid& g, const Vec& slab);
Vec y_profile(const Grid& g, const std::vector<double>& nodal);  // expand y-only data

SlabField restrict_slab(const Grid& base, const Grid& fine, const Vec& v);
SurfaceField restrict_surface(const Grid& base, const Grid& fine, const Vec& v);

// Background state and every derived coefficient field on the fine grid.
struct Core {
    Grid base, fine;
    const PhysicalParams* params = nullptr;
    const EquilibriumProfile* profile = nullptr;
    double gamma = 1.0;

    // state and geometry
    Vec q, u0, u1;          // slab
    Vec eta, etax;          // surface (fine nx)
    Vec E, Ex, Ey, J, invJ; // slab
    double min_jacobian = 1.0;

    // density stack
    Vec arg;     // -g y + q + g(eta - E)
    Vec sigma;   // H^{-1}(arg)
    Vec csigma;  // (H^{-1})'(arg)
    Vec mu, lam, dmu, dlam;
    Vec rho;     // equilibrium density, expanded y-only

    // velocity transforms
    Vec W0, W1;  // u - M e1
    Vec V0, V1;  // M^{-1} u
    Vec dxV0, dyV0, dxV1, dyV1;
    Vec divA;    // (A grad) . V
    Vec S00, S01, S11;  // stress tensor (S10 = S01)

    // forcing data composed with the flattening map (values at (x, y + E))
    Vec Gf0, Gf1, Ff0, Ff1;       // bulk data
    Vec dyG0, dyG1, dyF0, dyF1;   // their vertical slopes (linearization)
    // surface stress at (x, b + eta): values and vertical slopes
    Vec T00, T01, T10, T11, dyT00, dyT01, dyT10, dyT11;
    bool forcing_trivial = true;
};

// Builds the core; throws VacuumError / GeometryError on inadmissible states.
Core build_core(const State& w, const Forcing& forcing, const PhysicalParams& params,
                const EquilibriumProfile& profile);

// Nonlinear operator evaluated from a prepared core (restricted to base).
Residual evaluate_residual(const Core& c);

// Analytic directional derivative at the core's background.  forcing_dir may
// be null (pure state direction); gamma_dir is the wave-speed direction.
Residual evaluate_derivative(const Core& c, const State& dir, const Forcing* forcing_dir,
                             double gamma_dir);

struct PrincipalOptions {
    int m = 0;        // regularization order (0 = none; needs m >= 2 otherwise)
    double N = 0.0;   // regularization strength is 1/N (ignored when m == 0)
    double tau = 1.0; // homotopy weight on the transport term
};

// Principal part: full derivative-loss transport row, remaining coefficients
// frozen at equilibrium.
Residual evaluate_principal(const Core& c, const State& dir, const PrincipalOptions& opt);

// derivative-loss vector field v_{w0} = (H^{-1})'(arg)(u - M e1), on the base grid
std::array<SlabField, 2> v_field_base(const Core& c);

// N^{-1} L_m (q + g eta) for the direction, on the base grid
SlabField regularization_term(const Core& c, const State& dir, int m, double N);

}  // namespace strata::pipeline
