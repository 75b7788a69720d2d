#pragma once

#include <array>
#include <functional>
#include <string>

namespace strata {

// Evaluable scalar on R^2 with gradient; the flattening composes forcing
// data with displaced points, so gridded samples are not enough.
struct EvalField {
    std::function<double(double, double)> value;
    std::function<double(double, double)> ddx;
    std::function<double(double, double)> ddy;

    static EvalField zero();
    bool trivial = true;  // identically zero fast path
};

// Traveling stress / force data: surface stress tensor, specific and bulk
// body forces, all stationary in the frame moving at speed gamma.
struct Forcing {
    double gamma = 1.0;
    std::array<std::array<EvalField, 2>, 2> stress;  // script-T components
    std::array<EvalField, 2> specific_force;         // script-G
    std::array<EvalField, 2> bulk_force;             // script-F

    bool trivial_data() const;

    static Forcing zero(double gamma);

    // T = -phi I for a Gaussian bump phi centered at (cx, cy), periodized
    // over the horizontal period by the nearest-image convention so grid
    // translations act exactly.
    static Forcing gaussian_pressure(double gamma, double period, double cx, double cy,
                                     double width, double amplitude);

    // same data translated horizontally by dx (periodized fields translate
    // exactly)
    Forcing shifted(double dx, double period) const;

    // bookkeeping for manifests / checkpoints
    struct Descriptor {
        std::string kind = "zero";
        double cx = 0.0, cy = 0.0, width = 1.0, amplitude = 0.0;
    } descriptor;
};

}  // namespace strata
