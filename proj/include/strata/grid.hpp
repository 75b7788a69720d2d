#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "strata/chebyshev.hpp"

namespace strata {

// Discretization of the slab R x (0, depth), periodically truncated to a
// horizontal torus of period L.  Horizontal frequencies are xi_k = k / L for
// k = -nx/2 .. nx/2-1; the Nyquist mode is dropped everywhere, so the
// retained band is |k| <= nx/2 - 1.  Vertical nodes are Chebyshev-Lobatto
// on [0, depth].
struct Grid {
    double L = 16.0;        // horizontal period
    std::size_t nx = 32;    // horizontal sample count (even)
    std::size_t nz = 16;    // vertical node count (>= 8)
    double depth = 1.0;     // slab depth b
    int dim = 2;            // ambient dimension n (solve path: 2)
    double split_kappa = 1.0;  // low/high frequency split threshold

    Grid() : Grid(16.0, 32, 16, 1.0, 2) {}
    Grid(double L_, std::size_t nx_, std::size_t nz_, double depth_, int dim_ = 2);

    std::size_t max_mode() const { return nx / 2 - 1; }  // highest retained |k|
    double xi(std::size_t k) const { return static_cast<double>(k) / L; }
    double x(std::size_t ix) const { return L * static_cast<double>(ix) / static_cast<double>(nx); }
    const Chebyshev& vertical() const { return *vertical_; }
    double y(std::size_t iz) const { return vertical_->nodes()[iz]; }

    // grid with horizontal resolution scaled by 3/2 (same modes retained on
    // restriction); used for dealiased pointwise evaluation
    Grid refined() const;

    bool operator==(const Grid& o) const {
        return L == o.L && nx == o.nx && nz == o.nz && depth == o.depth && dim == o.dim;
    }

  private:
    std::shared_ptr<const Chebyshev> vertical_;
};

}  // namespace strata
