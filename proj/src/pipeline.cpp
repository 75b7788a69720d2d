#include "strata/pipeline.hpp"

#include <cmath>

#include "strata/errors.hpp"
#include "strata/fft.hpp"
#include "strata/kernels.hpp"

namespace strata::pipeline {

namespace {

// out += s * a
void acc(Vec& out, double s, const Vec& a) { kernels::axpy(s, a.data(), out.data(), out.size()); }

// out += s * a .* b
void accmul(Vec& out, double s, const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * a[i] * b[i];
}

Vec zeros(std::size_t n) { return Vec(n, 0.0); }

}  // namespace

Vec mul(const Vec& a, const Vec& b) {
    Vec out(a.size());
    kernels::multiply(a.data(), b.data(), out.data(), out.size());
    return out;
}

Vec add(const Vec& a, const Vec& b) {
    Vec out = a;
    acc(out, 1.0, b);
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec out = a;
    acc(out, -1.0, b);
    return out;
}

Vec scaled(double s, const Vec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

Vec dx_slab(const Grid& g, const Vec& v) {
    const std::size_t ns = fft::spectrum_size(g.nx);
    Vec out(v.size());
    std::vector<Complex> level(ns);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        fft::forward(v.data() + iz * g.nx, g.nx, level.data());
        for (std::size_t k = 0; k < ns; ++k) level[k] *= Complex(0.0, two_pi * g.xi(k));
        if (g.nx % 2 == 0) level[g.nx / 2] = 0.0;
        fft::inverse(level.data(), g.nx, out.data() + iz * g.nx);
    }
    return out;
}

Vec dz_slab(const Grid& g, const Vec& v) {
    Vec out(v.size());
    kernels::apply_columns(g.vertical().diff_matrix().data(), g.nz, g.nx, v.data(), out.data());
    return out;
}

Vec dx_surface(const Grid& g, const Vec& v) {
    const std::size_t ns = fft::spectrum_size(g.nx);
    std::vector<Complex> spec(ns);
    fft::forward(v.data(), g.nx, spec.data());
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < ns; ++k) spec[k] *= Complex(0.0, two_pi * g.xi(k));
    Vec out(g.nx);
    fft::inverse(spec.data(), g.nx, out.data());
    return out;
}

Vec replicate_rows(const Grid& g, const Vec& surface) {
    Vec out(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        std::copy(surface.begin(), surface.end(), out.begin() + iz * g.nx);
    return out;
}

Vec top_row(const Grid& g, const Vec& slab) {
    return Vec(slab.end() - g.nx, slab.end());
}

Vec y_profile(const Grid& g, const std::vector<double>& nodal) {
    Vec out(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        std::fill(out.begin() + iz * g.nx, out.begin() + (iz + 1) * g.nx, nodal[iz]);
    return out;
}

SlabField restrict_slab(const Grid& base, const Grid& fine, const Vec& v) {
    return SlabField::from_values(fine, v).resample(base);
}

SurfaceField restrict_surface(const Grid& base, const Grid& fine, const Vec& v) {
    return SurfaceField::from_values(fine, v).resample(base);
}

namespace {

struct FineDir {
    Vec q, u0, u1;   // slab direction on the fine grid
    Vec eta, etax;   // surface direction
};

FineDir lift_direction(const Core& c, const State& dir) {
    FineDir d;
    d.q = dir.q.resample(c.fine).values();
    d.u0 = dir.u[0].resample(c.fine).values();
    d.u1 = dir.u[1].resample(c.fine).values();
    SurfaceField eta_f = dir.eta.resample(c.fine);
    d.eta = eta_f.values();
    d.etax = eta_f.derivative().values();
    return d;
}

// gradient components of q + g*eta (eta extended constant in y)
std::array<Vec, 2> pressure_gradient(const Core& c, const Vec& q, const Vec& etax) {
    Vec gx = dx_slab(c.fine, q);
    acc(gx, c.params->gravity, replicate_rows(c.fine, etax));
    return {std::move(gx), dz_slab(c.fine, q)};
}

// (M^{-t} z) components
Vec mtinv0(const Core& c, const Vec& z0, const Vec& z1) {
    Vec out = mul(c.invJ, z0);
    accmul(out, 1.0, mul(c.Ex, c.invJ), z1);
    return out;
}

double surface_pressure_slope(const Core& c, double sigma_top) {
    return c.params->pressure.slope(sigma_top);
}

Vec curvature_fine(const Core& c) {
    Vec w(c.fine.nx);
    for (std::size_t i = 0; i < c.fine.nx; ++i) {
        const double s = c.etax[i];
        w[i] = s / std::sqrt(1.0 + s * s);
    }
    return dx_surface(c.fine, w);
}

}  // namespace

namespace {

// N^{-1} L_m phi with L_m = (-1)^m (d_x^{2m} + d_y^{2m}); the vertical part
// acts on the slab piece only (the surface piece is constant in y)
Vec elliptic_term(const Grid& g, const Vec& phi, const Vec& q_part, int m, double N) {
    const std::size_t ns = fft::spectrum_size(g.nx);
    std::vector<Complex> level(ns);
    Vec lm(phi.size(), 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        fft::forward(phi.data() + iz * g.nx, g.nx, level.data());
        for (std::size_t k = 0; k < ns; ++k)
            level[k] *= std::pow(two_pi * g.xi(k), 2.0 * m);
        fft::inverse(level.data(), g.nx, lm.data() + iz * g.nx);
    }
    Vec vert = q_part;
    for (int p = 0; p < 2 * m; ++p) vert = dz_slab(g, vert);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    acc(lm, sign, vert);
    Vec out(phi.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lm[i] / N;
    return out;
}

}  // namespace

SlabField regularization_term(const Core& c, const State& dir, int m, double N) {
    const FineDir d = lift_direction(c, dir);
    Vec phi = d.q;
    acc(phi, c.params->gravity, replicate_rows(c.fine, d.eta));
    return restrict_slab(c.base, c.fine, elliptic_term(c.fine, phi, d.q, m, N));
}

Core build_core(const State& w, const Forcing& forcing, const PhysicalParams& params,
                const EquilibriumProfile& profile) {
    Core c;
    c.base = w.grid();
    c.fine = c.base.refined();
    c.params = &params;
    c.profile = &profile;
    c.gamma = forcing.gamma;

    c.q = w.q.resample(c.fine).values();
    c.u0 = w.u[0].resample(c.fine).values();
    c.u1 = w.u[1].resample(c.fine).values();
    SurfaceField eta_f = w.eta.resample(c.fine);
    c.eta = eta_f.values();
    c.etax = eta_f.derivative().values();

    GeometryPack geom = build_geometry(eta_f);
    c.min_jacobian = geom.min_jacobian;
    if (!geom.diffeomorphic)
        throw GeometryError("flattening map degenerate: min J = " +
                            std::to_string(geom.min_jacobian));
    c.E = geom.E.values();
    c.Ex = geom.Ex.values();
    c.Ey = geom.Ey.values();
    c.J = geom.J.values();
    c.invJ = geom.invJ.values();

    const std::size_t n = c.q.size();
    const double grav = params.gravity;
    c.arg.resize(n);
    c.sigma.resize(n);
    c.csigma.resize(n);
    c.mu.resize(n);
    c.lam.resize(n);
    c.dmu.resize(n);
    c.dlam.resize(n);
    for (std::size_t iz = 0; iz < c.fine.nz; ++iz) {
        const double y = c.fine.y(iz);
        for (std::size_t ix = 0; ix < c.fine.nx; ++ix) {
            const std::size_t i = iz * c.fine.nx + ix;
            const double a = -grav * y + c.q[i] + grav * (c.eta[ix] - c.E[i]);
            if (!(a > profile.guard_low() && a < profile.guard_high()))
                throw VacuumError("inverse-enthalpy argument outside guard at node (" +
                                  std::to_string(ix) + "," + std::to_string(iz) + ")");
            c.arg[i] = a;
            const double s = profile.inverse_enthalpy(a);
            c.sigma[i] = s;
            c.csigma[i] = s / params.pressure.slope(s);
            c.mu[i] = params.viscosity.mu(s);
            c.lam[i] = params.viscosity.lambda(s);
            c.dmu[i] = params.viscosity.mu_slope(s);
            c.dlam[i] = params.viscosity.lambda_slope(s);
        }
    }
    c.rho = y_profile(c.fine, profile.density_nodes());

    c.W0 = sub(c.u0, c.J);
    c.W1 = add(c.u1, c.Ex);
    c.V0 = mul(c.u0, c.invJ);
    c.V1 = c.u1;
    accmul(c.V1, 1.0, mul(c.Ex, c.invJ), c.u0);

    c.dxV0 = dx_slab(c.fine, c.V0);
    c.dyV0 = dz_slab(c.fine, c.V0);
    c.dxV1 = dx_slab(c.fine, c.V1);
    c.dyV1 = dz_slab(c.fine, c.V1);

    const Vec ExinvJ = mul(c.Ex, c.invJ);
    c.divA = c.dxV0;
    accmul(c.divA, -1.0, ExinvJ, c.dyV0);
    accmul(c.divA, 1.0, c.invJ, c.dyV1);

    Vec RA00 = c.dxV0;
    accmul(RA00, -1.0, ExinvJ, c.dyV0);
    Vec RA01 = mul(c.invJ, c.dyV0);
    Vec RA10 = c.dxV1;
    accmul(RA10, -1.0, ExinvJ, c.dyV1);
    Vec RA11 = mul(c.invJ, c.dyV1);

    Vec D00 = scaled(2.0, RA00);
    acc(D00, -1.0, c.divA);
    Vec D01 = add(RA01, RA10);
    Vec D11 = scaled(2.0, RA11);
    acc(D11, -1.0, c.divA);

    c.S00 = mul(c.mu, D00);
    accmul(c.S00, 1.0, c.lam, c.divA);
    c.S01 = mul(c.mu, D01);
    c.S11 = mul(c.mu, D11);
    accmul(c.S11, 1.0, c.lam, c.divA);

    c.forcing_trivial = forcing.trivial_data();
    const auto eval_slab = [&](const EvalField& f, Vec& out, Vec& slope) {
        out = zeros(n);
        slope = zeros(n);
        if (f.trivial) return;
        for (std::size_t iz = 0; iz < c.fine.nz; ++iz) {
            const double y = c.fine.y(iz);
            for (std::size_t ix = 0; ix < c.fine.nx; ++ix) {
                const std::size_t i = iz * c.fine.nx + ix;
                const double px = c.fine.x(ix), py = y + c.E[i];
                out[i] = f.value(px, py);
                slope[i] = f.ddy(px, py);
            }
        }
    };
    eval_slab(forcing.specific_force[0], c.Gf0, c.dyG0);
    eval_slab(forcing.specific_force[1], c.Gf1, c.dyG1);
    eval_slab(forcing.bulk_force[0], c.Ff0, c.dyF0);
    eval_slab(forcing.bulk_force[1], c.Ff1, c.dyF1);

    const double b = c.fine.depth;
    const auto eval_top = [&](const EvalField& f, Vec& out, Vec& slope) {
        out = zeros(c.fine.nx);
        slope = zeros(c.fine.nx);
        if (f.trivial) return;
        for (std::size_t ix = 0; ix < c.fine.nx; ++ix) {
            const double px = c.fine.x(ix), py = b + c.eta[ix];
            out[ix] = f.value(px, py);
            slope[ix] = f.ddy(px, py);
        }
    };
    eval_top(forcing.stress[0][0], c.T00, c.dyT00);
    eval_top(forcing.stress[0][1], c.T01, c.dyT01);
    eval_top(forcing.stress[1][0], c.T10, c.dyT10);
    eval_top(forcing.stress[1][1], c.T11, c.dyT11);
    return c;
}

Residual evaluate_residual(const Core& c) {
    const Grid& g = c.fine;
    const double gamma = c.gamma;
    const double varsigma = c.params->surface_tension;

    // continuity row
    Vec gfield = dx_slab(g, mul(c.sigma, c.W0));
    acc(gfield, 1.0, dz_slab(g, mul(c.sigma, c.W1)));

    // advective term and pressure gradient
    Vec adv0 = mul(c.W0, c.dxV0);
    accmul(adv0, 1.0, c.W1, c.dyV0);
    Vec adv1 = mul(c.W0, c.dxV1);
    accmul(adv1, 1.0, c.W1, c.dyV1);

    auto grad = pressure_gradient(c, c.q, c.etax);

    // viscous stress contracted with M^t, then its divergence
    Vec T00 = mul(c.S00, c.J);
    Vec T01 = c.S01;
    accmul(T01, -1.0, c.S00, c.Ex);
    Vec T10 = mul(c.S01, c.J);
    Vec T11 = c.S11;
    accmul(T11, -1.0, c.S01, c.Ex);
    Vec divT0 = dx_slab(g, T00);
    acc(divT0, 1.0, dz_slab(g, T01));
    Vec divT1 = dx_slab(g, T10);
    acc(divT1, 1.0, dz_slab(g, T11));

    Vec mad0 = mtinv0(c, adv0, adv1);
    Vec mdt0 = mtinv0(c, divT0, divT1);

    Vec f0 = mul(c.sigma, mad0);
    f0 = scaled(gamma * gamma, f0);
    accmul(f0, 1.0, c.sigma, grad[0]);
    acc(f0, -gamma, mdt0);
    Vec f1 = mul(c.sigma, adv1);
    f1 = scaled(gamma * gamma, f1);
    accmul(f1, 1.0, c.sigma, grad[1]);
    acc(f1, -gamma, divT1);

    if (!c.forcing_trivial) {
        Vec z0 = mul(c.sigma, c.Gf0);
        acc(z0, 1.0, c.Ff0);
        Vec z1 = mul(c.sigma, c.Gf1);
        acc(z1, 1.0, c.Ff1);
        acc(f0, -1.0, z0);
        accmul(f0, -1.0, c.Ex, z1);
        accmul(f1, -1.0, c.J, z1);
    }

    // dynamic boundary condition at the top trace
    const Vec sig_top = top_row(g, c.sigma);
    const Vec s00 = top_row(g, c.S00), s01 = top_row(g, c.S01), s11 = top_row(g, c.S11);
    const Vec curv = curvature_fine(c);
    Vec k0(g.nx), k1(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double pi_term = c.params->pressure.value(sig_top[i]) - c.params->external_pressure;
        const double ex = c.etax[i];
        const double phi30 = c.T00[i] * ex - c.T01[i];
        const double phi31 = c.T10[i] * ex - c.T11[i];
        k0[i] = pi_term * ex - gamma * (s00[i] * ex - s01[i]) + varsigma * curv[i] * ex + phi30;
        k1[i] = -pi_term - gamma * (s01[i] * ex - s11[i]) - varsigma * curv[i] + phi31;
    }

    Residual out(c.base);
    out.g = restrict_slab(c.base, g, gfield);
    out.f[0] = restrict_slab(c.base, g, f0);
    out.f[1] = restrict_slab(c.base, g, f1);
    out.k[0] = restrict_surface(c.base, g, k0);
    out.k[1] = restrict_surface(c.base, g, k1);
    return out;
}

Residual evaluate_derivative(const Core& c, const State& dir, const Forcing* forcing_dir,
                             double gamma_dir) {
    const Grid& g = c.fine;
    const double gamma = c.gamma;
    const double grav = c.params->gravity;
    const double varsigma = c.params->surface_tension;
    const std::size_t n = c.q.size();

    const FineDir d = lift_direction(c, dir);

    // geometry linearization (linear in the surface direction)
    SurfaceField deta_f = SurfaceField::from_values(g, d.eta);
    const Vec dE = extend_surface(deta_f).values();
    const Vec dEy = extend_surface_dz(deta_f).values();
    const Vec dEx = extend_surface(deta_f.derivative()).values();
    const Vec& dJ = dEy;

    const Vec ExinvJ = mul(c.Ex, c.invJ);
    Vec dinvJ(n), dExinvJ(n);
    for (std::size_t i = 0; i < n; ++i) {
        dinvJ[i] = -dJ[i] * c.invJ[i] * c.invJ[i];
        dExinvJ[i] = dEx[i] * c.invJ[i] + c.Ex[i] * dinvJ[i];
    }

    // density stack linearization
    Vec darg = d.q;
    acc(darg, grav, replicate_rows(g, d.eta));
    acc(darg, -grav, dE);
    const Vec dsigma = mul(c.csigma, darg);
    const Vec dmu_f = mul(c.dmu, dsigma);
    const Vec dlam_f = mul(c.dlam, dsigma);

    // velocity transforms
    Vec dW0 = sub(d.u0, dJ);
    Vec dW1 = add(d.u1, dEx);
    Vec dV0 = mul(c.invJ, d.u0);
    accmul(dV0, 1.0, dinvJ, c.u0);
    Vec dV1 = d.u1;
    accmul(dV1, 1.0, ExinvJ, d.u0);
    accmul(dV1, 1.0, dExinvJ, c.u0);

    const Vec ddxV0 = dx_slab(g, dV0), ddyV0 = dz_slab(g, dV0);
    const Vec ddxV1 = dx_slab(g, dV1), ddyV1 = dz_slab(g, dV1);

    Vec ddivA = ddxV0;
    accmul(ddivA, -1.0, dExinvJ, c.dyV0);
    accmul(ddivA, -1.0, ExinvJ, ddyV0);
    accmul(ddivA, 1.0, dinvJ, c.dyV1);
    accmul(ddivA, 1.0, c.invJ, ddyV1);

    Vec dRA00 = ddxV0;
    accmul(dRA00, -1.0, dExinvJ, c.dyV0);
    accmul(dRA00, -1.0, ExinvJ, ddyV0);
    Vec dRA01 = mul(dinvJ, c.dyV0);
    accmul(dRA01, 1.0, c.invJ, ddyV0);
    Vec dRA10 = ddxV1;
    accmul(dRA10, -1.0, dExinvJ, c.dyV1);
    accmul(dRA10, -1.0, ExinvJ, ddyV1);
    Vec dRA11 = mul(dinvJ, c.dyV1);
    accmul(dRA11, 1.0, c.invJ, ddyV1);

    // background deviatoric pieces (reconstructed from the stored stress)
    Vec RA00 = c.dxV0;
    accmul(RA00, -1.0, ExinvJ, c.dyV0);
    Vec RA01 = mul(c.invJ, c.dyV0);
    Vec RA10 = c.dxV1;
    accmul(RA10, -1.0, ExinvJ, c.dyV1);
    Vec RA11 = mul(c.invJ, c.dyV1);
    Vec D00 = scaled(2.0, RA00);
    acc(D00, -1.0, c.divA);
    Vec D01 = add(RA01, RA10);
    Vec D11 = scaled(2.0, RA11);
    acc(D11, -1.0, c.divA);

    Vec dD00 = scaled(2.0, dRA00);
    acc(dD00, -1.0, ddivA);
    Vec dD01 = add(dRA01, dRA10);
    Vec dD11 = scaled(2.0, dRA11);
    acc(dD11, -1.0, ddivA);

    Vec dS00 = mul(dmu_f, D00);
    accmul(dS00, 1.0, c.mu, dD00);
    accmul(dS00, 1.0, dlam_f, c.divA);
    accmul(dS00, 1.0, c.lam, ddivA);
    Vec dS01 = mul(dmu_f, D01);
    accmul(dS01, 1.0, c.mu, dD01);
    Vec dS11 = mul(dmu_f, D11);
    accmul(dS11, 1.0, c.mu, dD11);
    accmul(dS11, 1.0, dlam_f, c.divA);
    accmul(dS11, 1.0, c.lam, ddivA);

    // continuity row
    Vec gx = mul(dsigma, c.W0);
    accmul(gx, 1.0, c.sigma, dW0);
    Vec gy = mul(dsigma, c.W1);
    accmul(gy, 1.0, c.sigma, dW1);
    Vec gfield = dx_slab(g, gx);
    acc(gfield, 1.0, dz_slab(g, gy));

    // momentum row: advective part
    Vec adv0 = mul(c.W0, c.dxV0);
    accmul(adv0, 1.0, c.W1, c.dyV0);
    Vec adv1 = mul(c.W0, c.dxV1);
    accmul(adv1, 1.0, c.W1, c.dyV1);
    Vec dadv0 = mul(dW0, c.dxV0);
    accmul(dadv0, 1.0, dW1, c.dyV0);
    accmul(dadv0, 1.0, c.W0, ddxV0);
    accmul(dadv0, 1.0, c.W1, ddyV0);
    Vec dadv1 = mul(dW0, c.dxV1);
    accmul(dadv1, 1.0, dW1, c.dyV1);
    accmul(dadv1, 1.0, c.W0, ddxV1);
    accmul(dadv1, 1.0, c.W1, ddyV1);

    Vec mad0 = mtinv0(c, adv0, adv1);
    // delta(M^{-t} adv)
    Vec dmad0 = mul(dinvJ, adv0);
    accmul(dmad0, 1.0, dExinvJ, adv1);
    accmul(dmad0, 1.0, c.invJ, dadv0);
    accmul(dmad0, 1.0, ExinvJ, dadv1);

    Vec f0(n, 0.0), f1(n, 0.0);
    accmul(f0, gamma * gamma, dsigma, mad0);
    accmul(f0, gamma * gamma, c.sigma, dmad0);
    accmul(f0, 2.0 * gamma * gamma_dir, c.sigma, mad0);
    accmul(f1, gamma * gamma, dsigma, adv1);
    accmul(f1, gamma * gamma, c.sigma, dadv1);
    accmul(f1, 2.0 * gamma * gamma_dir, c.sigma, adv1);

    // pressure gradient part
    auto grad_bg = pressure_gradient(c, c.q, c.etax);
    auto grad_dir = pressure_gradient(c, d.q, d.etax);
    accmul(f0, 1.0, dsigma, grad_bg[0]);
    accmul(f0, 1.0, c.sigma, grad_dir[0]);
    accmul(f1, 1.0, dsigma, grad_bg[1]);
    accmul(f1, 1.0, c.sigma, grad_dir[1]);

    // viscous part
    Vec T00 = mul(c.S00, c.J);
    Vec T01 = c.S01;
    accmul(T01, -1.0, c.S00, c.Ex);
    Vec T10 = mul(c.S01, c.J);
    Vec T11 = c.S11;
    accmul(T11, -1.0, c.S01, c.Ex);
    Vec divT0 = dx_slab(g, T00);
    acc(divT0, 1.0, dz_slab(g, T01));
    Vec divT1 = dx_slab(g, T10);
    acc(divT1, 1.0, dz_slab(g, T11));

    Vec dT00 = mul(dS00, c.J);
    accmul(dT00, 1.0, c.S00, dJ);
    Vec dT01 = dS01;
    accmul(dT01, -1.0, dS00, c.Ex);
    accmul(dT01, -1.0, c.S00, dEx);
    Vec dT10 = mul(dS01, c.J);
    accmul(dT10, 1.0, c.S01, dJ);
    Vec dT11 = dS11;
    accmul(dT11, -1.0, dS01, c.Ex);
    accmul(dT11, -1.0, c.S01, dEx);
    Vec ddivT0 = dx_slab(g, dT00);
    acc(ddivT0, 1.0, dz_slab(g, dT01));
    Vec ddivT1 = dx_slab(g, dT10);
    acc(ddivT1, 1.0, dz_slab(g, dT11));

    // -gamma_dir M^{-t} divT - gamma [ dM^{-t} divT + M^{-t} ddivT ]
    Vec mdt0 = mtinv0(c, divT0, divT1);
    acc(f0, -gamma_dir, mdt0);
    acc(f1, -gamma_dir, divT1);
    Vec dmdt0 = mul(dinvJ, divT0);
    accmul(dmdt0, 1.0, dExinvJ, divT1);
    accmul(dmdt0, 1.0, c.invJ, ddivT0);
    accmul(dmdt0, 1.0, ExinvJ, ddivT1);
    acc(f0, -gamma, dmdt0);
    acc(f1, -gamma, ddivT1);

    // forcing contributions (Q part: data fixed, geometry/density move; R
    // part: data direction through the background geometry)
    const bool data_dir = forcing_dir != nullptr && !forcing_dir->trivial_data();
    if (!c.forcing_trivial || data_dir) {
        Vec z1 = mul(c.sigma, c.Gf1);
        acc(z1, 1.0, c.Ff1);
        Vec dz0 = mul(dsigma, c.Gf0);
        accmul(dz0, 1.0, mul(c.sigma, c.dyG0), dE);
        accmul(dz0, 1.0, c.dyF0, dE);
        Vec dz1 = mul(dsigma, c.Gf1);
        accmul(dz1, 1.0, mul(c.sigma, c.dyG1), dE);
        accmul(dz1, 1.0, c.dyF1, dE);
        if (data_dir) {
            for (std::size_t iz = 0; iz < g.nz; ++iz) {
                const double y = g.y(iz);
                for (std::size_t ix = 0; ix < g.nx; ++ix) {
                    const std::size_t i = iz * g.nx + ix;
                    const double px = g.x(ix), py = y + c.E[i];
                    dz0[i] += c.sigma[i] * forcing_dir->specific_force[0].value(px, py) +
                              forcing_dir->bulk_force[0].value(px, py);
                    dz1[i] += c.sigma[i] * forcing_dir->specific_force[1].value(px, py) +
                              forcing_dir->bulk_force[1].value(px, py);
                }
            }
        }
        acc(f0, -1.0, dz0);
        accmul(f0, -1.0, dEx, z1);
        accmul(f0, -1.0, c.Ex, dz1);
        accmul(f1, -1.0, dJ, z1);
        accmul(f1, -1.0, c.J, dz1);
    }

    // dynamic boundary condition
    const Vec sig_top = top_row(g, c.sigma);
    const Vec dsig_top = top_row(g, dsigma);
    const Vec s00 = top_row(g, c.S00), s01 = top_row(g, c.S01), s11 = top_row(g, c.S11);
    const Vec ds00 = top_row(g, dS00), ds01 = top_row(g, dS01), ds11 = top_row(g, dS11);
    const Vec curv = curvature_fine(c);
    Vec kappa0(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double s = c.etax[i];
        kappa0[i] = std::pow(1.0 + s * s, -1.5) * d.etax[i];
    }
    const Vec dcurv = dx_surface(g, kappa0);

    Vec k0(g.nx), k1(g.nx);
    const double b = g.depth;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double ex = c.etax[i], dex = d.etax[i];
        const double pi_term = c.params->pressure.value(sig_top[i]) - c.params->external_pressure;
        const double dpi = surface_pressure_slope(c, sig_top[i]) * dsig_top[i];
        k0[i] = dpi * ex + pi_term * dex
                - gamma_dir * (s00[i] * ex - s01[i])
                - gamma * (ds00[i] * ex + s00[i] * dex - ds01[i])
                + varsigma * (dcurv[i] * ex + curv[i] * dex);
        k1[i] = -dpi
                - gamma_dir * (s01[i] * ex - s11[i])
                - gamma * (ds01[i] * ex + s01[i] * dex - ds11[i])
                - varsigma * dcurv[i];
        // surface stress data: evaluation point moves by (0, deta)
        k0[i] += c.dyT00[i] * d.eta[i] * ex + c.T00[i] * dex - c.dyT01[i] * d.eta[i];
        k1[i] += c.dyT10[i] * d.eta[i] * ex + c.T10[i] * dex - c.dyT11[i] * d.eta[i];
        if (data_dir) {
            const double px = g.x(i), py = b + c.eta[i];
            k0[i] += forcing_dir->stress[0][0].value(px, py) * ex -
                     forcing_dir->stress[0][1].value(px, py);
            k1[i] += forcing_dir->stress[1][0].value(px, py) * ex -
                     forcing_dir->stress[1][1].value(px, py);
        }
    }

    Residual out(c.base);
    out.g = restrict_slab(c.base, g, gfield);
    out.f[0] = restrict_slab(c.base, g, f0);
    out.f[1] = restrict_slab(c.base, g, f1);
    out.k[0] = restrict_surface(c.base, g, k0);
    out.k[1] = restrict_surface(c.base, g, k1);
    return out;
}

Residual evaluate_principal(const Core& c, const State& dir, const PrincipalOptions& opt) {
    const Grid& g = c.fine;
    const double gamma = c.gamma;
    const double grav = c.params->gravity;
    const double varsigma = c.params->surface_tension;
    const std::size_t n = c.q.size();

    const FineDir d = lift_direction(c, dir);

    // transport row with the derivative-loss vector field
    Vec phi = d.q;
    acc(phi, grav, replicate_rows(g, d.eta));
    Vec vw0 = mul(c.csigma, c.W0);
    Vec vw1 = mul(c.csigma, c.W1);
    Vec gfield = dx_slab(g, mul(c.rho, d.u0));
    acc(gfield, 1.0, dz_slab(g, mul(c.rho, d.u1)));
    if (opt.tau != 0.0) {
        Vec tx = dx_slab(g, mul(vw0, phi));
        acc(tx, 1.0, dz_slab(g, mul(vw1, phi)));
        acc(gfield, opt.tau, tx);
    }
    if (opt.m >= 2 && opt.N > 0.0) {
        acc(gfield, 1.0, elliptic_term(g, phi, d.q, opt.m, opt.N));
    }

    // momentum row frozen at equilibrium
    const Vec dxu0 = dx_slab(g, d.u0), dyu0 = dz_slab(g, d.u0);
    const Vec dxu1 = dx_slab(g, d.u1), dyu1 = dz_slab(g, d.u1);
    Vec divu = add(dxu0, dyu1);
    Vec D00 = sub(dxu0, dyu1);  // 2 dxu0 - div
    Vec D01 = add(dyu0, dxu1);
    Vec D11 = sub(dyu1, dxu0);

    Vec mu_rho(n), lam_rho(n), rho_line(n);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        const double r = c.profile->density_nodes()[iz];
        const double m = c.params->viscosity.mu(r);
        const double l = c.params->viscosity.lambda(r);
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = iz * g.nx + ix;
            mu_rho[i] = m;
            lam_rho[i] = l;
            rho_line[i] = r;
        }
    }
    Vec Sp00 = mul(mu_rho, D00);
    accmul(Sp00, 1.0, lam_rho, divu);
    Vec Sp01 = mul(mu_rho, D01);
    Vec Sp11 = mul(mu_rho, D11);
    accmul(Sp11, 1.0, lam_rho, divu);

    Vec divSp0 = dx_slab(g, Sp00);
    acc(divSp0, 1.0, dz_slab(g, Sp01));
    Vec divSp1 = dx_slab(g, Sp01);
    acc(divSp1, 1.0, dz_slab(g, Sp11));

    auto grad_dir = pressure_gradient(c, d.q, d.etax);
    Vec f0(n, 0.0), f1(n, 0.0);
    accmul(f0, -gamma * gamma, rho_line, dxu0);
    accmul(f0, 1.0, rho_line, grad_dir[0]);
    acc(f0, -gamma, divSp0);
    accmul(f1, -gamma * gamma, rho_line, dxu1);
    accmul(f1, 1.0, rho_line, grad_dir[1]);
    acc(f1, -gamma, divSp1);

    // frozen dynamic boundary condition
    const double rho_top = c.profile->density_nodes()[g.nz - 1];
    const Vec sp01 = top_row(g, Sp01), sp11 = top_row(g, Sp11);
    const Vec dq_top = top_row(g, d.q);
    const Vec detaxx = dx_surface(g, d.etax);
    Vec k0(g.nx), k1(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) {
        k0[i] = gamma * sp01[i];
        k1[i] = -rho_top * dq_top[i] + gamma * sp11[i] - varsigma * detaxx[i];
    }

    Residual out(c.base);
    out.g = restrict_slab(c.base, g, gfield);
    out.f[0] = restrict_slab(c.base, g, f0);
    out.f[1] = restrict_slab(c.base, g, f1);
    out.k[0] = restrict_surface(c.base, g, k0);
    out.k[1] = restrict_surface(c.base, g, k1);
    return out;
}

std::array<SlabField, 2> v_field_base(const Core& c) {
    return {restrict_slab(c.base, c.fine, mul(c.csigma, c.W0)),
            restrict_slab(c.base, c.fine, mul(c.csigma, c.W1))};
}

}  // namespace strata::pipeline
