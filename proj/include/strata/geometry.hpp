#pragma once

#include "strata/field.hpp"

namespace strata {

// Flattening-map geometry derived from a free surface field eta.  With
// E = extend(eta), the map is F(x, y) = (x, y + E(x, y)); its Jacobian is
// J = 1 + dE/dy, and for n = 2
//   M = J A^t = [[J, 0], [-dE/dx, 1]],   A = (grad F)^{-t} = M^t / J.
struct GeometryPack {
    SlabField E;    // extension of eta
    SlabField Ex;   // horizontal derivative of E  (equals extension of eta')
    SlabField Ey;   // vertical derivative of E (analytic, mode-wise)
    SlabField J;    // 1 + Ey
    SlabField invJ;
    SurfaceField eta_x;  // surface slope; normal is (-eta_x, 1)
    double min_jacobian = 1.0;
    bool diffeomorphic = true;

    const Grid& grid() const { return E.grid(); }
};

// Zero-Dirichlet-bottom harmonic extension: mode k != 0 is carried by
// sinh(2 pi |xi| y) / sinh(2 pi |xi| b); the zero mode maps to zero.
SlabField poisson_extend_zero(const SurfaceField& phi);

// Poisson-like extension: linear-in-y lift of the low-frequency part plus
// the harmonic extension of the high-frequency part (split at grid.kappa).
SlabField extend_surface(const SurfaceField& eta);
// analytic vertical derivative of extend_surface
SlabField extend_surface_dz(const SurfaceField& eta);

// Builds the full pack; degenerate geometry (min J <= 0) is flagged, and
// callers that require a diffeomorphism should reject such states.
GeometryPack build_geometry(const SurfaceField& eta);

// H(eta) = d/dx ( eta' / sqrt(1 + eta'^2) ), evaluated pseudo-spectrally
// with 3/2 dealiasing.
SurfaceField mean_curvature(const SurfaceField& eta);

}  // namespace strata
