#pragma once

#include <cstddef>
#include <vector>

namespace strata {

// Chebyshev-Lobatto collocation machinery on [0, height].  Node 0 sits at
// y = 0 (rigid bottom) and node count-1 at y = height (free surface), so
// traces are plain endpoint reads.
class Chebyshev {
  public:
    Chebyshev() = default;
    Chebyshev(std::size_t count, double height);

    std::size_t count() const { return nodes_.size(); }
    double height() const { return height_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& quad_weights() const { return weights_; }

    // dense differentiation matrix (row-major count x count)
    const std::vector<double>& diff_matrix() const { return diff_; }

    // apply d/dy along a nodal column: out[i] = sum_j D[i][j] in[j]
    void differentiate(const double* in, double* out) const;

    // Clenshaw-Curtis integral over [0, height]
    double integrate(const double* values) const;

    // barycentric interpolation of nodal data to arbitrary y
    double interpolate(const double* values, double y) const;

  private:
    double height_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;   // Clenshaw-Curtis
    std::vector<double> bary_;      // barycentric weights
    std::vector<double> diff_;      // row-major D
};

}  // namespace strata
