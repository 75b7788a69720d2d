#pragma once

#include <array>

#include "strata/field.hpp"

namespace strata {

// Right inverses of the divergence on the slab, built from the mode-wise
// Neumann problem -zeta'' + 4 pi^2 |xi|^2 zeta = psi_hat.

// div B0 psi = psi with zero full boundary trace; psi must satisfy the
// divergence compatibility (vanishing k = 0 vertical integral).
std::array<SlabField, 2> bogovskii_zero_trace(const SlabField& psi);

// div B psi = psi with zero bottom trace (no compatibility needed)
std::array<SlabField, 2> bogovskii_bottom_trace(const SlabField& psi);

// Solenoidal extension: divergence-free field whose top normal trace is chi,
// with zero tangential top trace and zero bottom trace; chi must be mean-free.
std::array<SlabField, 2> solenoidal_extension(const SurfaceField& chi);

}  // namespace strata
