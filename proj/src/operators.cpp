#include "strata/operators.hpp"

#include <cmath>
#include <numbers>

#include "strata/errors.hpp"
#include "strata/fft.hpp"
#include "strata/geometry.hpp"
#include "strata/pipeline.hpp"

namespace strata {

SlabField density_field(const SlabField& q, const SurfaceField& eta,
                        const EquilibriumProfile& profile) {
    const Grid& g = q.grid();
    const SlabField E = extend_surface(eta);
    const double grav = profile.params().gravity;
    std::vector<double> out(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        const double y = g.y(iz);
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double a =
                -grav * y + q.value(iz, ix) + grav * (eta.value(ix) - E.value(iz, ix));
            if (!(a > profile.guard_low() && a < profile.guard_high()))
                throw VacuumError("density_field: argument outside guard at node (" +
                                  std::to_string(ix) + "," + std::to_string(iz) + ")");
            out[iz * g.nx + ix] = profile.inverse_enthalpy(a);
        }
    }
    return SlabField::from_values(g, std::move(out));
}

Residual residual(const State& w, const Forcing& forcing, const PhysicalParams& params,
                  const EquilibriumProfile& profile) {
    pipeline::Core core = pipeline::build_core(w, forcing, params, profile);
    return pipeline::evaluate_residual(core);
}

namespace {

// harmonic vector lift with prescribed bottom trace, zero tangential top
// trace, and prescribed normal top trace; mode-wise sinh interpolation
SlabField harmonic_lift(const Grid& g, const SurfaceField& bottom, const SurfaceField& top) {
    const auto& sb = bottom.spectrum();
    const auto& st = top.spectrum();
    const std::size_t ns = fft::spectrum_size(g.nx);
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Complex> levels(g.nz * ns, 0.0);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        const double y = g.y(iz);
        for (std::size_t k = 0; k <= g.max_mode(); ++k) {
            double wb, wt;
            if (k == 0) {
                wb = 1.0 - y / g.depth;
                wt = y / g.depth;
            } else {
                const double a = two_pi * g.xi(k);
                const double den = std::sinh(a * g.depth);
                wb = std::sinh(a * (g.depth - y)) / den;
                wt = std::sinh(a * y) / den;
            }
            levels[iz * ns + k] = wb * sb[k] + wt * st[k];
        }
    }
    std::vector<double> vals(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        fft::inverse(levels.data() + iz * ns, g.nx, vals.data() + iz * g.nx);
    return SlabField::from_values(g, std::move(vals));
}

}  // namespace

State kinematic_project(const State& w) {
    const Grid& g = w.grid();
    State out = w;
    const SurfaceField zero(g);
    SurfaceField defect = w.u[1].top_trace();
    defect += w.eta.derivative();
    out.u[0] -= harmonic_lift(g, w.u[0].bottom_trace(), zero);
    out.u[1] -= harmonic_lift(g, w.u[1].bottom_trace(), defect);
    return out;
}

EulerianSample to_eulerian(const State& w, const EquilibriumProfile& profile) {
    const Grid& g = w.grid();
    const GeometryPack geom = build_geometry(w.eta);
    if (!geom.diffeomorphic) throw GeometryError("to_eulerian: degenerate flattening map");

    const SlabField sig = density_field(w.q, w.eta, profile);
    EulerianSample s;
    const std::size_t n = g.nx * g.nz;
    s.x.resize(n);
    s.y.resize(n);
    s.sigma.resize(n);
    s.v0.resize(n);
    s.v1.resize(n);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = iz * g.nx + ix;
            const double J = geom.J.value(iz, ix);
            const double ex = geom.Ex.value(iz, ix);
            s.x[i] = g.x(ix);
            s.y[i] = g.y(iz) + geom.E.value(iz, ix);
            s.sigma[i] = sig.value(iz, ix);
            // v composed with the flattening equals M^{-1} u
            s.v0[i] = w.u[0].value(iz, ix) / J;
            s.v1[i] = ex / J * w.u[0].value(iz, ix) + w.u[1].value(iz, ix);
        }
    }
    return s;
}

State from_eulerian(const EulerianSample& sample, const SurfaceField& eta,
                    const EquilibriumProfile& profile) {
    const Grid& g = eta.grid();
    const GeometryPack geom = build_geometry(eta);
    if (!geom.diffeomorphic) throw GeometryError("from_eulerian: degenerate flattening map");
    const double grav = profile.params().gravity;

    State w(g);
    std::vector<double> q(g.nx * g.nz), u0(g.nx * g.nz), u1(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = iz * g.nx + ix;
            const double J = geom.J.value(iz, ix);
            const double ex = geom.Ex.value(iz, ix);
            // u = M v
            u0[i] = J * sample.v0[i];
            u1[i] = -ex * sample.v0[i] + sample.v1[i];
            // q = H(sigma) + g (y + E) - g eta
            q[i] = profile.enthalpy(sample.sigma[i]) + grav * sample.y[i] - grav * eta.value(ix);
        }
    }
    w.q = SlabField::from_values(g, std::move(q));
    w.u[0] = SlabField::from_values(g, std::move(u0));
    w.u[1] = SlabField::from_values(g, std::move(u1));
    w.eta = eta;
    return w;
}

}  // namespace strata
