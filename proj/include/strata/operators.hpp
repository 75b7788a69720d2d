#pragma once

#include "strata/equilibrium.hpp"
#include "strata/forcing.hpp"
#include "strata/state.hpp"

namespace strata {

// Density field sigma_{q,eta} = H^{-1}(-g y + q + g(eta - E eta)) on the
// state's grid.  Throws VacuumError when the argument leaves the guarded
// enthalpy interval.
SlabField density_field(const SlabField& q, const SurfaceField& eta,
                        const EquilibriumProfile& profile);

// Traveling-wave operator: continuity, momentum, and dynamic-boundary rows
// evaluated with 3/2-dealiased products.  The wave speed rides on forcing.
Residual residual(const State& w, const Forcing& forcing, const PhysicalParams& params,
                  const EquilibriumProfile& profile);

// Enforces the solution-space boundary conditions (zero bottom trace and
// the linear kinematic condition) by subtracting a harmonic correction;
// idempotent.
State kinematic_project(const State& w);

// Physical-frame sample: the flattened unknowns pushed forward to the image
// points F(grid).
struct EulerianSample {
    std::vector<double> x, y;          // image points, z-major like slab data
    std::vector<double> sigma;         // density
    std::vector<double> v0, v1;        // velocity components
};

EulerianSample to_eulerian(const State& w, const EquilibriumProfile& profile);

// Inverse change of unknowns; eta must be the surface used to produce the
// sample (its grid fixes the image points).
State from_eulerian(const EulerianSample& sample, const SurfaceField& eta,
                    const EquilibriumProfile& profile);

}  // namespace strata
