#include "strata/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "strata/fft.hpp"
#include "strata/norms.hpp"
#include "strata/pipeline.hpp"

namespace strata {

namespace {

using pipeline::Vec;

// integral over the slab: trapezoid in x (uniform torus), Clenshaw-Curtis in y
double slab_integral(const Grid& g, const Vec& v) {
    const auto& w = g.vertical().quad_weights();
    const double dx = g.L / static_cast<double>(g.nx);
    double acc = 0.0;
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        double row = 0.0;
        for (std::size_t ix = 0; ix < g.nx; ++ix) row += v[iz * g.nx + ix];
        acc += w[iz] * row * dx;
    }
    return acc;
}

double surface_integral(const Grid& g, const Vec& v) {
    const double dx = g.L / static_cast<double>(g.nx);
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc * dx;
}

// dissipation side of the balance, from a prepared core
double dissipation_integral(const pipeline::Core& c) {
    const Grid& g = c.fine;
    const std::size_t n = c.q.size();
    Vec divu = pipeline::dx_slab(g, c.u0);
    {
        Vec dy = pipeline::dz_slab(g, c.u1);
        for (std::size_t i = 0; i < n; ++i) divu[i] += dy[i];
    }
    Vec density(n);
    for (std::size_t i = 0; i < n; ++i) {
        // G = grad(V) M with the slab's lower-triangular M
        const double g00 = c.dxV0[i] * c.J[i] - c.dyV0[i] * c.Ex[i];
        const double g01 = c.dyV0[i];
        const double g10 = c.dxV1[i] * c.J[i] - c.dyV1[i] * c.Ex[i];
        const double g11 = c.dyV1[i];
        const double d00 = 2.0 * g00 - divu[i];
        const double d01 = g01 + g10;
        const double d11 = 2.0 * g11 - divu[i];
        const double dev2 = d00 * d00 + 2.0 * d01 * d01 + d11 * d11;
        density[i] =
            c.gamma * c.invJ[i] * (0.5 * c.mu[i] * dev2 + c.lam[i] * divu[i] * divu[i]);
    }
    return slab_integral(g, density);
}

// fractional-multiplier pairing g * sum_k (|xi|^{-1} G_k)(|xi| eta_k)
double gravity_pairing(const Grid& g, const SurfaceField& column, const SurfaceField& eta,
                       double grav) {
    const auto& cg = column.spectrum();
    const auto& ce = eta.spectrum();
    double acc = 0.0;
    for (std::size_t k = 1; k <= g.max_mode(); ++k)
        acc += 2.0 * (cg[k] * std::conj(ce[k])).real();
    return grav * g.L * acc;
}

}  // namespace

BalanceReport power_balance(const State& w, const Residual& data, double gamma,
                            const PhysicalParams& params, const EquilibriumProfile& profile) {
    const pipeline::Core core =
        pipeline::build_core(w, Forcing::zero(gamma), params, profile);
    const Grid& g = core.fine;
    const std::size_t n = core.q.size();

    BalanceReport rep;
    rep.dissipation = dissipation_integral(core);

    const Vec f0 = data.f[0].resample(g).values();
    const Vec f1 = data.f[1].resample(g).values();
    const Vec gd = data.g.resample(g).values();
    Vec bulk(n), head(n);
    for (std::size_t i = 0; i < n; ++i) {
        bulk[i] = f0[i] * core.u0[i] + f1[i] * core.u1[i];
        const double v2 = core.V0[i] * core.V0[i] + core.V1[i] * core.V1[i];
        head[i] = gd[i] * (0.5 * gamma * gamma * v2 + core.q[i]);
    }
    rep.bulk_work = slab_integral(g, bulk);
    rep.pressure_work = slab_integral(g, head);
    rep.gravity_work =
        gravity_pairing(w.grid(), data.g.integrate_vertical(), w.eta, params.gravity);

    const Vec k0 = data.k[0].resample(g).values();
    const Vec k1 = data.k[1].resample(g).values();
    Vec surf(g.nx);
    const Vec v0t = pipeline::top_row(g, core.V0);
    const Vec v1t = pipeline::top_row(g, core.V1);
    for (std::size_t ix = 0; ix < g.nx; ++ix) surf[ix] = k0[ix] * v0t[ix] + k1[ix] * v1t[ix];
    rep.surface_work = surface_integral(g, surf);

    rep.rhs_total = rep.bulk_work + rep.pressure_work + rep.gravity_work + rep.surface_work;
    rep.imbalance = std::abs(rep.dissipation - rep.rhs_total) /
                    std::max({std::abs(rep.dissipation), std::abs(rep.rhs_total), 1e-30});
    return rep;
}

BalanceReport power_balance(const State& w, const Forcing& forcing, const PhysicalParams& params,
                            const EquilibriumProfile& profile) {
    const pipeline::Core core = pipeline::build_core(w, forcing, params, profile);
    const Grid& g = core.fine;
    const std::size_t n = core.q.size();

    BalanceReport rep;
    rep.dissipation = dissipation_integral(core);

    Vec bulk(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z0 = core.sigma[i] * core.Gf0[i] + core.Ff0[i];
        const double z1 = core.sigma[i] * core.Gf1[i] + core.Ff1[i];
        bulk[i] = core.J[i] * (z0 * core.V0[i] + z1 * core.V1[i]);
    }
    rep.bulk_work = slab_integral(g, bulk);

    Vec surf(g.nx);
    const Vec v0t = pipeline::top_row(g, core.V0);
    const Vec v1t = pipeline::top_row(g, core.V1);
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const double ex = core.etax[ix];
        const double row0 = -core.T00[ix] * ex + core.T01[ix];
        const double row1 = -core.T10[ix] * ex + core.T11[ix];
        surf[ix] = row0 * v0t[ix] + row1 * v1t[ix];
    }
    rep.surface_work = surface_integral(g, surf);

    rep.rhs_total = rep.bulk_work + rep.surface_work;
    rep.imbalance = std::abs(rep.dissipation - rep.rhs_total) /
                    std::max({std::abs(rep.dissipation), std::abs(rep.rhs_total), 1e-30});
    return rep;
}

double adapted_norm(const State& w, const Background& bg, int s) {
    const auto v = v_field(bg);
    const Grid fine = w.grid().refined();
    const Vec q = w.q.resample(fine).values();
    const Vec v0 = v[0].resample(fine).values();
    const Vec v1 = v[1].resample(fine).values();
    Vec flux = pipeline::dx_slab(fine, pipeline::mul(v0, q));
    {
        Vec dz = pipeline::dz_slab(fine, pipeline::mul(v1, q));
        for (std::size_t i = 0; i < flux.size(); ++i) flux[i] += dz[i];
    }
    const SlabField transported = pipeline::restrict_slab(w.grid(), fine, flux);
    const double base = xspace_norm(w, s);
    const double extra = sobolev_norm(transported, 1 + s);
    return std::sqrt(base * base + extra * extra);
}

SanityReport sanity_suite(const State& w, const PhysicalParams& params,
                          const EquilibriumProfile& profile, double forcing_center_x) {
    SanityReport rep;
    const pipeline::Core core =
        pipeline::build_core(w, Forcing::zero(1.0), params, profile);

    double lo = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (double a : core.arg) {
        if (std::isfinite(profile.h_min())) lo = std::min(lo, a - profile.h_min());
        if (std::isfinite(profile.h_max())) hi = std::min(hi, profile.h_max() - a);
    }
    rep.vacuum_margin_low = lo;
    rep.vacuum_margin_high = hi;
    rep.min_jacobian = core.min_jacobian;
    rep.diffeomorphic = core.min_jacobian > 0.0;

    // Korn probe: the state's own velocity when present, a shear profile
    // with zero bottom trace otherwise
    const Grid& g = w.grid();
    std::array<SlabField, 2> u = w.u;
    if (sobolev_norm(u[0], 0) + sobolev_norm(u[1], 0) == 0.0) {
        std::vector<double> shear(g.nx * g.nz);
        for (std::size_t iz = 0; iz < g.nz; ++iz)
            for (std::size_t ix = 0; ix < g.nx; ++ix) shear[iz * g.nx + ix] = g.y(iz);
        u[0] = SlabField::from_values(g, std::move(shear));
    }
    {
        const SlabField dx0 = u[0].dx(), dy0 = u[0].dz();
        const SlabField dx1 = u[1].dx(), dy1 = u[1].dz();
        Vec density(g.nx * g.nz);
        for (std::size_t i = 0; i < density.size(); ++i) {
            const double d00 = 2.0 * dx0.values()[i];
            const double d01 = dy0.values()[i] + dx1.values()[i];
            const double d11 = 2.0 * dy1.values()[i];
            density[i] = d00 * d00 + 2.0 * d01 * d01 + d11 * d11;
        }
        const double sym = std::sqrt(slab_integral(g, density));
        const double h1 = std::sqrt(std::pow(sobolev_norm(u[0], 1), 2) +
                                    std::pow(sobolev_norm(u[1], 1), 2));
        rep.korn_ratio = sym > 0.0 ? h1 / sym : 0.0;
    }

    // decay probe at distance L/2 from the forcing footprint
    double peak = 0.0;
    for (double v : w.eta.values()) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        const double xf = forcing_center_x + 0.5 * g.L;
        const std::size_t ix =
            static_cast<std::size_t>(std::llround(xf / g.L * g.nx)) % g.nx;
        rep.decay_ratio = std::abs(w.eta.value(ix)) / peak;
    }

    // column-flux compatibility: H^-1 mass of the vertical integral of the
    // continuity flux against the L^2 size of the flux itself
    {
        const Vec flux0 = pipeline::mul(core.sigma, core.W0);
        const Vec flux1 = pipeline::mul(core.sigma, core.W1);
        Vec div = pipeline::dx_slab(core.fine, flux0);
        Vec dz = pipeline::dz_slab(core.fine, flux1);
        for (std::size_t i = 0; i < div.size(); ++i) div[i] += dz[i];
        const SlabField gfield = pipeline::restrict_slab(g, core.fine, div);
        const SurfaceField column = gfield.integrate_vertical();
        const auto& spec = column.spectrum();
        double semi = 0.0;
        for (std::size_t k = 1; k <= g.max_mode(); ++k) {
            const double xi = g.xi(k);
            semi += 2.0 * std::norm(spec[k]) / (xi * xi);
        }
        semi = std::sqrt(g.L * semi);
        Vec mass(div.size());
        for (std::size_t i = 0; i < mass.size(); ++i) {
            // flux shifted by the equilibrium column (rho e1 carries no
            // divergence and no vertical trace)
            const double a0 = flux0[i] + core.rho[i];
            mass[i] = a0 * a0 + flux1[i] * flux1[i];
        }
        const double l2 = std::sqrt(slab_integral(core.fine, mass));
        rep.div_compat_ratio = l2 > 0.0 ? semi / l2 : 0.0;
    }
    return rep;
}

}  // namespace strata
