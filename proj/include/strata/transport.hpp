#pragma once

#include <array>

#include "strata/field.hpp"

namespace strata {

// Regularized steady transport solve
//   Lambda0 f + N^{-1} L_m f + div(Lambda1 X f) = psi   in the slab,
//   d_n^m f = ... = d_n^{2m-1} f = 0                    on both boundaries,
// with L_m = (-1)^m (d_x^{2m} + d_y^{2m}).  Pass m = 0 (or N = inf) to drop
// the regularization; the transport term is then collocated on all vertical
// nodes.  X must carry vanishing vertical component on the boundaries.
struct TransportProblem {
    SlabField lambda0;
    SlabField lambda1;
    std::array<SlabField, 2> X;
    int m = 0;
    double N = 0.0;
};

SlabField steady_transport_solve(const TransportProblem& prob, const SlabField& psi);

// forward operator (dealiased), shared by the solver's assembly and tests
SlabField steady_transport_apply(const TransportProblem& prob, const SlabField& f);

}  // namespace strata
