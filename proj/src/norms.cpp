#include "strata/norms.hpp"

#include <cmath>
#include <functional>

#include "strata/errors.hpp"
#include "strata/fft.hpp"

namespace strata {

namespace {

double bracket_sq(double xi) { return 1.0 + xi * xi; }

double mode_weight_multiplicity(std::size_t k) { return k == 0 ? 1.0 : 2.0; }

// L^2(0,b) of the k-th coefficient profile via Clenshaw-Curtis
double coeff_profile_sq(const SlabField& f, std::size_t k) {
    const auto& w = f.grid().vertical().quad_weights();
    double acc = 0.0;
    for (std::size_t iz = 0; iz < f.grid().nz; ++iz) acc += w[iz] * std::norm(f.coeff(iz, k));
    return acc;
}

// Guard against genuinely non-mean-free input.  The absolute floor admits
// the fft-roundoff means that differences of O(1) fields carry.
void require_mean_free(const SurfaceField& f, const char* who) {
    const auto& s = f.spectrum();
    double scale = 0.0;
    for (const auto& c : s) scale = std::max(scale, std::abs(c));
    if (std::abs(s[0]) > 1e-8 * scale + 1e-14)
        throw ConstraintError(std::string(who) + ": field must be mean-free");
}

double low_frequency_weight(double xi1, double xi_norm) {
    const double n2 = xi_norm * xi_norm;
    return (xi1 * xi1 + n2 * n2) / n2;
}

SurfaceField cutoff_surface(const SurfaceField& f, double kappa, bool keep_low) {
    const auto& s = f.spectrum();
    std::vector<Complex> out(s.size(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const bool low = f.grid().xi(k) < kappa;
        if (low == keep_low) out[k] = s[k];
    }
    return SurfaceField::from_spectrum(f.grid(), out);
}

SlabField cutoff_slab(const SlabField& f, double kappa, bool keep_low) {
    const Grid& g = f.grid();
    const auto& s = f.spectrum();
    const std::size_t ns = fft::spectrum_size(g.nx);
    std::vector<double> vals(g.nx * g.nz);
    std::vector<Complex> level(ns);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        for (std::size_t k = 0; k < ns; ++k) {
            const bool low = g.xi(k) < kappa;
            level[k] = (low == keep_low) ? s[iz * ns + k] : 0.0;
        }
        fft::inverse(level.data(), g.nx, vals.data() + iz * g.nx);
    }
    return SlabField::from_values(g, std::move(vals));
}

}  // namespace

double sobolev_norm(const SurfaceField& f, double s) {
    const Grid& g = f.grid();
    const auto& c = f.spectrum();
    double acc = 0.0;
    for (std::size_t k = 0; k <= g.max_mode(); ++k)
        acc += mode_weight_multiplicity(k) * std::pow(bracket_sq(g.xi(k)), s) * std::norm(c[k]);
    return std::sqrt(g.L * acc);
}

double sobolev_norm(const SlabField& f, int s) {
    const Grid& g = f.grid();
    double acc = 0.0;
    SlabField der = f;
    for (int c = 0; c <= s; ++c) {
        if (c > 0) der = der.dz();
        for (std::size_t k = 0; k <= g.max_mode(); ++k)
            acc += mode_weight_multiplicity(k) * std::pow(bracket_sq(g.xi(k)), s - c) *
                   coeff_profile_sq(der, k);
    }
    return std::sqrt(g.L * acc);
}

double anisotropic_norm(const SurfaceField& eta, double s) {
    require_mean_free(eta, "anisotropic_norm");
    const Grid& g = eta.grid();
    const auto& c = eta.spectrum();
    const double kappa = g.split_kappa;
    double acc = 0.0;
    for (std::size_t k = 1; k <= g.max_mode(); ++k) {
        const double xi = g.xi(k);
        const double w = xi < kappa ? low_frequency_weight(xi, xi) : std::pow(bracket_sq(xi), s);
        acc += 2.0 * w * std::norm(c[k]);
    }
    return std::sqrt(g.L * acc);
}

double anisotropic_norm(const Surface2Field& eta, double s) {
    if (std::abs(eta.mean()) > 1e-8 * (1.0 + std::abs(eta.values()[0])))
        throw ConstraintError("anisotropic_norm: field must be mean-free");
    const auto& c = eta.spectrum();
    const std::size_t n1 = eta.n1(), n2 = eta.n2();
    double acc = 0.0;
    for (std::size_t k1 = 0; k1 < n1; ++k1) {
        const long s1 = k1 <= n1 / 2 ? static_cast<long>(k1) : static_cast<long>(k1) - static_cast<long>(n1);
        if (static_cast<std::size_t>(std::labs(s1)) == n1 / 2) continue;  // Nyquist
        for (std::size_t k2 = 0; k2 < n2; ++k2) {
            const long s2 = k2 <= n2 / 2 ? static_cast<long>(k2) : static_cast<long>(k2) - static_cast<long>(n2);
            if (static_cast<std::size_t>(std::labs(s2)) == n2 / 2) continue;
            if (s1 == 0 && s2 == 0) continue;
            const double xi1 = static_cast<double>(s1) / eta.L1();
            const double xi2 = static_cast<double>(s2) / eta.L2();
            const double norm_xi = std::hypot(xi1, xi2);
            const double w = norm_xi < 1.0 ? low_frequency_weight(xi1, norm_xi)
                                           : std::pow(bracket_sq(norm_xi), s);
            acc += w * std::norm(c[k1 * n2 + k2]);
        }
    }
    return std::sqrt(eta.L1() * eta.L2() * acc);
}

int anisotropic_algebra_power(int d) {
    if (d <= 1) return 1;
    return 1 + (d + 1) / (d - 1);
}

SurfaceField project_low(const SurfaceField& f, double kappa) { return cutoff_surface(f, kappa, true); }
SurfaceField project_high(const SurfaceField& f, double kappa) { return cutoff_surface(f, kappa, false); }
SlabField project_low(const SlabField& f, double kappa) { return cutoff_slab(f, kappa, true); }
SlabField project_high(const SlabField& f, double kappa) { return cutoff_slab(f, kappa, false); }

SurfaceField smooth_cutoff(const SurfaceField& f, int j) {
    return project_low(f, std::ldexp(1.0, j));
}
SlabField smooth_cutoff(const SlabField& f, int j) { return project_low(f, std::ldexp(1.0, j)); }

SurfaceField lp_block(const SurfaceField& f, int j) {
    if (j == 0) return smooth_cutoff(f, 1);
    return smooth_cutoff(f, j + 1) - smooth_cutoff(f, j);
}
SlabField lp_block(const SlabField& f, int j) {
    if (j == 0) return smooth_cutoff(f, 1);
    return smooth_cutoff(f, j + 1) - smooth_cutoff(f, j);
}

double hminus1_seminorm(const SurfaceField& f) {
    require_mean_free(f, "hminus1_seminorm");
    const Grid& g = f.grid();
    const auto& c = f.spectrum();
    double acc = 0.0;
    for (std::size_t k = 1; k <= g.max_mode(); ++k) {
        const double xi = g.xi(k);
        acc += 2.0 * std::norm(c[k]) / (xi * xi);
    }
    return std::sqrt(g.L * acc);
}

double hminus1_seminorm(const Surface2Field& f) {
    const auto& c = f.spectrum();
    const std::size_t n1 = f.n1(), n2 = f.n2();
    double acc = 0.0;
    for (std::size_t k1 = 0; k1 < n1; ++k1) {
        const long s1 = k1 <= n1 / 2 ? static_cast<long>(k1) : static_cast<long>(k1) - static_cast<long>(n1);
        if (static_cast<std::size_t>(std::labs(s1)) == n1 / 2) continue;
        for (std::size_t k2 = 0; k2 < n2; ++k2) {
            const long s2 = k2 <= n2 / 2 ? static_cast<long>(k2) : static_cast<long>(k2) - static_cast<long>(n2);
            if (static_cast<std::size_t>(std::labs(s2)) == n2 / 2) continue;
            if (s1 == 0 && s2 == 0) continue;
            const double xi1 = static_cast<double>(s1) / f.L1();
            const double xi2 = static_cast<double>(s2) / f.L2();
            acc += std::norm(c[k1 * n2 + k2]) / (xi1 * xi1 + xi2 * xi2);
        }
    }
    return std::sqrt(f.L1() * f.L2() * acc);
}

double hhat_norm(const SlabField& g, int s) {
    const SurfaceField column = g.integrate_vertical();
    const Grid& gr = g.grid();
    const auto& c = column.spectrum();
    double semi = 0.0;  // zero mode excluded by the mean-free convention
    for (std::size_t k = 1; k <= gr.max_mode(); ++k) {
        const double xi = gr.xi(k);
        semi += 2.0 * std::norm(c[k]) / (xi * xi);
    }
    semi *= gr.L;
    const double sob = sobolev_norm(g, s);
    return std::sqrt(sob * sob + semi);
}

double xspace_norm(const State& w, int s) {
    const double nq = sobolev_norm(w.q, 1 + s);
    const double nu0 = sobolev_norm(w.u[0], 2 + s);
    const double nu1 = sobolev_norm(w.u[1], 2 + s);
    const double ne = anisotropic_norm(w.eta, 2.5 + s);
    return std::sqrt(nq * nq + nu0 * nu0 + nu1 * nu1 + ne * ne);
}

double yspace_norm(const Residual& r, int s) {
    const double ng = hhat_norm(r.g, 1 + s);
    const double nf0 = sobolev_norm(r.f[0], s);
    const double nf1 = sobolev_norm(r.f[1], s);
    const double nk0 = sobolev_norm(r.k[0], 0.5 + s);
    const double nk1 = sobolev_norm(r.k[1], 0.5 + s);
    return std::sqrt(ng * ng + nf0 * nf0 + nf1 * nf1 + nk0 * nk0 + nk1 * nk1);
}

ConstraintReport xspace_constraints(const State& w) {
    ConstraintReport rep;
    const double b0 = sobolev_norm(w.u[0].bottom_trace(), 0.5);
    const double b1 = sobolev_norm(w.u[1].bottom_trace(), 0.5);
    rep.bottom_violation = std::sqrt(b0 * b0 + b1 * b1);
    SurfaceField kin = w.u[1].top_trace();
    kin += w.eta.derivative();
    rep.kinematic_violation = sobolev_norm(kin, 0.5);
    return rep;
}

State smooth_cutoff(const State& w, int j) {
    State out = w;
    out.q = smooth_cutoff(w.q, j);
    out.u[0] = smooth_cutoff(w.u[0], j);
    out.u[1] = smooth_cutoff(w.u[1], j);
    out.eta = smooth_cutoff(w.eta, j);
    return out;
}

State lp_block(const State& w, int j) {
    State out = w;
    out.q = lp_block(w.q, j);
    out.u[0] = lp_block(w.u[0], j);
    out.u[1] = lp_block(w.u[1], j);
    out.eta = lp_block(w.eta, j);
    return out;
}

Residual smooth_cutoff(const Residual& r, int j) {
    Residual out = r;
    out.g = smooth_cutoff(r.g, j);
    out.f[0] = smooth_cutoff(r.f[0], j);
    out.f[1] = smooth_cutoff(r.f[1], j);
    out.k[0] = smooth_cutoff(r.k[0], j);
    out.k[1] = smooth_cutoff(r.k[1], j);
    return out;
}

Residual lp_block(const Residual& r, int j) {
    Residual out = r;
    out.g = lp_block(r.g, j);
    out.f[0] = lp_block(r.f[0], j);
    out.f[1] = lp_block(r.f[1], j);
    out.k[0] = lp_block(r.k[0], j);
    out.k[1] = lp_block(r.k[1], j);
    return out;
}

}  // namespace strata
