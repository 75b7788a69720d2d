#include "strata/bogovskii.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "strata/errors.hpp"
#include "strata/fft.hpp"

namespace strata {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Collocation solve of -zeta'' + a^2 zeta = rhs with Neumann ends, on a
// refined vertical grid so the boundary-row replacement costs only spectral
// truncation.  For a = 0 the constant kernel is pinned at the middle node
// (legitimate for compatible data).
struct VerticalNeumann {
    Chebyshev cheb;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool pinned = false;

    VerticalNeumann(std::size_t nz, double depth, double a) : cheb(nz + 8, depth) {
        const std::size_t m = cheb.count();
        Eigen::MatrixXd D(m, m);
        const auto& raw = cheb.diff_matrix();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) D(i, j) = raw[i * m + j];
        Eigen::MatrixXd A = -(D * D).eval();
        for (std::size_t i = 0; i < m; ++i) A(i, i) += a * a;
        // Neumann rows at both ends
        for (std::size_t j = 0; j < m; ++j) {
            A(0, j) = D(0, j);
            A(m - 1, j) = D(m - 1, j);
        }
        if (a == 0.0) {
            pinned = true;
            for (std::size_t j = 0; j < m; ++j) A(m / 2, j) = 0.0;
            A(m / 2, m / 2) = 1.0;
        }
        lu = Eigen::PartialPivLU<Eigen::MatrixXd>(A);
    }

    // returns zeta and zeta' interpolated onto the caller's nodes
    void solve(const std::vector<Complex>& rhs_nodes, const Chebyshev& target,
               std::vector<Complex>& zeta, std::vector<Complex>& dzeta) const {
        const std::size_t m = cheb.count();
        Eigen::VectorXd re(m), im(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double y = cheb.nodes()[i];
            // rhs arrives as values on the target nodes; interpolate
            std::vector<double> vr(target.count()), vi(target.count());
            for (std::size_t j = 0; j < target.count(); ++j) {
                vr[j] = rhs_nodes[j].real();
                vi[j] = rhs_nodes[j].imag();
            }
            re[i] = target.interpolate(vr.data(), y);
            im[i] = target.interpolate(vi.data(), y);
        }
        re[0] = im[0] = 0.0;
        re[m - 1] = im[m - 1] = 0.0;
        if (pinned) re[m / 2] = im[m / 2] = 0.0;
        const Eigen::VectorXd sr = lu.solve(re), si = lu.solve(im);

        std::vector<double> zr(m), zi(m), dr(m), di(m);
        for (std::size_t i = 0; i < m; ++i) {
            zr[i] = sr[i];
            zi[i] = si[i];
        }
        cheb.differentiate(zr.data(), dr.data());
        cheb.differentiate(zi.data(), di.data());

        zeta.resize(target.count());
        dzeta.resize(target.count());
        for (std::size_t j = 0; j < target.count(); ++j) {
            const double y = target.nodes()[j];
            zeta[j] = Complex(cheb.interpolate(zr.data(), y), cheb.interpolate(zi.data(), y));
            dzeta[j] = Complex(cheb.interpolate(dr.data(), y), cheb.interpolate(di.data(), y));
        }
    }
};

// cubic Hermite blending: value zero at both ends, unit slope at one end
double hermite_bottom_slope(double y, double b) {
    const double t = y / b;
    return b * t * (1.0 - t) * (1.0 - t);
}
double hermite_top_slope(double y, double b) {
    const double t = y / b;
    return b * t * t * (t - 1.0);
}
double hermite_bottom_slope_dz(double y, double b) {
    const double t = y / b;
    return (1.0 - t) * (1.0 - 3.0 * t);
}
double hermite_top_slope_dz(double y, double b) {
    const double t = y / b;
    return t * (3.0 * t - 2.0);
}

std::array<SlabField, 2> from_levels(const Grid& g, const std::vector<Complex>& c0,
                                     const std::vector<Complex>& c1) {
    const std::size_t ns = fft::spectrum_size(g.nx);
    std::vector<double> v0(g.nx * g.nz), v1(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        fft::inverse(c0.data() + iz * ns, g.nx, v0.data() + iz * g.nx);
        fft::inverse(c1.data() + iz * ns, g.nx, v1.data() + iz * g.nx);
    }
    return {SlabField::from_values(g, std::move(v0)), SlabField::from_values(g, std::move(v1))};
}

}  // namespace

std::array<SlabField, 2> bogovskii_zero_trace(const SlabField& psi) {
    const Grid& g = psi.grid();
    const std::size_t nz = g.nz;
    const std::size_t ns = fft::spectrum_size(g.nx);
    const Chebyshev& cheb = g.vertical();

    {
        const SurfaceField column = psi.integrate_vertical();
        const auto& col = column.spectrum();
        double scale = 0.0;
        for (const auto& c : col) scale = std::max(scale, std::abs(c));
        if (std::abs(col[0]) > 1e-10 * scale + 1e-13)
            throw ConstraintError("bogovskii_zero_trace: k = 0 vertical integral must vanish");
    }

    std::vector<Complex> X0(nz * ns, 0.0), X1(nz * ns, 0.0);
    std::vector<Complex> rhs(nz), zeta, dzeta;
    for (std::size_t k = 0; k <= g.max_mode(); ++k) {
        const double a = kTwoPi * g.xi(k);
        const VerticalNeumann ode(nz, g.depth, a);
        for (std::size_t iz = 0; iz < nz; ++iz) rhs[iz] = psi.coeff(iz, k);
        ode.solve(rhs, cheb, zeta, dzeta);
        const Complex iota(0.0, a);
        for (std::size_t iz = 0; iz < nz; ++iz) {
            X0[iz * ns + k] = -iota * zeta[iz];
            X1[iz * ns + k] = -dzeta[iz];
        }
    }

    // tangential-trace correction: omega = R(0, -X0 | boundary); the added
    // field (d_y omega, -d_1 omega) is divergence-free by construction
    std::vector<Complex> bot(ns), top(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        bot[k] = -X0[0 * ns + k];
        top[k] = -X0[(nz - 1) * ns + k];
    }
    for (std::size_t iz = 0; iz < nz; ++iz) {
        const double y = g.y(iz);
        const double h1 = hermite_bottom_slope(y, g.depth);
        const double h2 = hermite_top_slope(y, g.depth);
        const double dh1 = hermite_bottom_slope_dz(y, g.depth);
        const double dh2 = hermite_top_slope_dz(y, g.depth);
        for (std::size_t k = 0; k <= g.max_mode(); ++k) {
            const Complex omega = bot[k] * h1 + top[k] * h2;
            const Complex domega = bot[k] * dh1 + top[k] * dh2;
            const Complex iota(0.0, kTwoPi * g.xi(k));
            X0[iz * ns + k] += domega;
            X1[iz * ns + k] -= iota * omega;
        }
    }
    return from_levels(g, X0, X1);
}

std::array<SlabField, 2> bogovskii_bottom_trace(const SlabField& psi) {
    const Grid& g = psi.grid();
    // subtract the y-lifted vertical average, invert the rest with full
    // zero trace, and put the average back through (y/b) column e_n
    const SurfaceField column = psi.integrate_vertical();
    std::vector<double> corrected = psi.values();
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            corrected[iz * g.nx + ix] -= column.value(ix) / g.depth;
    auto base = bogovskii_zero_trace(SlabField::from_values(g, std::move(corrected)));

    std::vector<double> lift(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            lift[iz * g.nx + ix] = g.y(iz) / g.depth * column.value(ix);
    base[1] += SlabField::from_values(g, std::move(lift));
    return base;
}

std::array<SlabField, 2> solenoidal_extension(const SurfaceField& chi) {
    const Grid& g = chi.grid();
    {
        const auto& s = chi.spectrum();
        double scale = 0.0;
        for (const auto& c : s) scale = std::max(scale, std::abs(c));
        if (std::abs(s[0]) > 1e-10 * scale + 1e-13)
            throw ConstraintError("solenoidal_extension: chi must be mean-free");
    }
    // smooth normal lift (0, chi phi(y)) with phi(0) = phi'(0) = 0, phi(b) = 1
    auto phi = [&](double y) {
        const double t = y / g.depth;
        return t * t * (3.0 - 2.0 * t);
    };
    auto dphi = [&](double y) {
        const double t = y / g.depth;
        return 6.0 * t * (1.0 - t) / g.depth;
    };
    std::vector<double> lift(g.nx * g.nz), div(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            lift[iz * g.nx + ix] = chi.value(ix) * phi(g.y(iz));
            div[iz * g.nx + ix] = chi.value(ix) * dphi(g.y(iz));
        }
    auto correction = bogovskii_zero_trace(SlabField::from_values(g, std::move(div)));
    std::array<SlabField, 2> out{SlabField(g), SlabField(g)};
    out[0] -= correction[0];
    out[1] = SlabField::from_values(g, std::move(lift));
    out[1] -= correction[1];
    return out;
}

}  // namespace strata
