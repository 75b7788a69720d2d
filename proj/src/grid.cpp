#include "strata/grid.hpp"

#include <stdexcept>

namespace strata {

Grid::Grid(double L_, std::size_t nx_, std::size_t nz_, double depth_, int dim_)
    : L(L_), nx(nx_), nz(nz_), depth(depth_), dim(dim_) {
    if (nx % 2 != 0 || nx < 8) throw std::invalid_argument("grid: nx must be even and >= 8");
    if (nz < 8) throw std::invalid_argument("grid: nz must be >= 8");
    if (L <= 0.0 || depth <= 0.0) throw std::invalid_argument("grid: L and depth must be positive");
    vertical_ = std::make_shared<Chebyshev>(nz, depth);
}

Grid Grid::refined() const {
    Grid g(L, (3 * nx) / 2, nz, depth, dim);
    g.split_kappa = split_kappa;
    return g;
}

}  // namespace strata
