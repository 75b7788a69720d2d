#pragma once

#include <array>

#include "strata/field.hpp"

namespace strata {

// Solution triple: perturbed enthalpy q (minus the g*eta shift), flattened
// rescaled velocity u, and free surface eta.
struct State {
    SlabField q;
    std::array<SlabField, 2> u;
    SurfaceField eta;

    State() = default;
    explicit State(const Grid& g) : q(g), u{SlabField(g), SlabField(g)}, eta(g) {}

    const Grid& grid() const { return q.grid(); }

    static State zero_like(const State& o) { return State(o.grid()); }

    void add_scaled(double s, const State& o) {
        q.add_scaled(s, o.q);
        u[0].add_scaled(s, o.u[0]);
        u[1].add_scaled(s, o.u[1]);
        eta.add_scaled(s, o.eta);
    }
    void scale(double s) {
        q *= s;
        u[0] *= s;
        u[1] *= s;
        eta *= s;
    }
};

// Codomain triple: continuity residual g, momentum residual f, dynamic
// boundary condition residual k (a surface vector field).
struct Residual {
    SlabField g;
    std::array<SlabField, 2> f;
    std::array<SurfaceField, 2> k;

    Residual() = default;
    explicit Residual(const Grid& gr)
        : g(gr), f{SlabField(gr), SlabField(gr)}, k{SurfaceField(gr), SurfaceField(gr)} {}

    const Grid& grid() const { return g.grid(); }

    static Residual zero_like(const Residual& o) { return Residual(o.grid()); }

    void add_scaled(double s, const Residual& o) {
        g.add_scaled(s, o.g);
        f[0].add_scaled(s, o.f[0]);
        f[1].add_scaled(s, o.f[1]);
        k[0].add_scaled(s, o.k[0]);
        k[1].add_scaled(s, o.k[1]);
    }
    void scale(double s) {
        g *= s;
        f[0] *= s;
        f[1] *= s;
        k[0] *= s;
        k[1] *= s;
    }
};

inline State operator-(State a, const State& b) {
    a.add_scaled(-1.0, b);
    return a;
}
inline Residual operator-(Residual a, const Residual& b) {
    a.add_scaled(-1.0, b);
    return a;
}

}  // namespace strata
