#include "strata/geometry.hpp"

#include <cmath>
#include <numbers>

#include "strata/errors.hpp"
#include "strata/fft.hpp"
#include "strata/kernels.hpp"

namespace strata {

namespace {

// sinh(a y) / sinh(a b) and its y-derivative, in overflow-safe exponential form
double sinh_ratio(double a, double y, double b) {
    return std::exp(a * (y - b)) * (1.0 - std::exp(-2.0 * a * y)) /
           (1.0 - std::exp(-2.0 * a * b));
}
double sinh_ratio_dz(double a, double y, double b) {
    return a * std::exp(a * (y - b)) * (1.0 + std::exp(-2.0 * a * y)) /
           (1.0 - std::exp(-2.0 * a * b));
}

enum class Part { low_and_high, high_only };
enum class Deriv { none, dz };

// assemble a slab field mode-by-mode from eta's spectrum with the extension
// profiles; low modes ride the linear-in-y lift, high modes the sinh branch
SlabField build_extension(const SurfaceField& eta, Part part, Deriv deriv) {
    const Grid& g = eta.grid();
    const auto& spec = eta.spectrum();
    const std::size_t ns = fft::spectrum_size(g.nx);
    const double two_pi = 2.0 * std::numbers::pi;
    const double b = g.depth;

    std::vector<Complex> levels(g.nz * ns, 0.0);
    kernels::map_index(g.nz, [&](std::size_t iz) {
        const double y = g.y(iz);
        for (std::size_t k = 0; k <= g.max_mode(); ++k) {
            const double xi = g.xi(k);
            double prof;
            if (xi < g.split_kappa) {
                if (part == Part::high_only) continue;
                prof = (deriv == Deriv::none) ? y / b : 1.0 / b;
            } else {
                const double a = two_pi * xi;
                prof = (deriv == Deriv::none) ? sinh_ratio(a, y, b) : sinh_ratio_dz(a, y, b);
            }
            levels[iz * ns + k] = prof * spec[k];
        }
    });

    std::vector<double> vals(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        fft::inverse(levels.data() + iz * ns, g.nx, vals.data() + iz * g.nx);
    return SlabField::from_values(g, std::move(vals));
}

}  // namespace

SlabField poisson_extend_zero(const SurfaceField& phi) {
    const Grid& g = phi.grid();
    const auto& spec = phi.spectrum();
    const std::size_t ns = fft::spectrum_size(g.nx);
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Complex> levels(g.nz * ns, 0.0);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        const double y = g.y(iz);
        for (std::size_t k = 1; k <= g.max_mode(); ++k)
            levels[iz * ns + k] = sinh_ratio(two_pi * g.xi(k), y, g.depth) * spec[k];
    }
    std::vector<double> vals(g.nx * g.nz);
    for (std::size_t iz = 0; iz < g.nz; ++iz)
        fft::inverse(levels.data() + iz * ns, g.nx, vals.data() + iz * g.nx);
    return SlabField::from_values(g, std::move(vals));
}

SlabField extend_surface(const SurfaceField& eta) {
    return build_extension(eta, Part::low_and_high, Deriv::none);
}

SlabField extend_surface_dz(const SurfaceField& eta) {
    return build_extension(eta, Part::low_and_high, Deriv::dz);
}

GeometryPack build_geometry(const SurfaceField& eta) {
    GeometryPack pack;
    pack.E = extend_surface(eta);
    pack.Ey = extend_surface_dz(eta);
    pack.Ex = extend_surface(eta.derivative());
    pack.eta_x = eta.derivative();

    const Grid& g = eta.grid();
    std::vector<double> jv(g.nx * g.nz), ij(g.nx * g.nz);
    double min_j = 1e300;
    const auto& ey = pack.Ey.values();
    for (std::size_t i = 0; i < jv.size(); ++i) {
        jv[i] = 1.0 + ey[i];
        min_j = std::min(min_j, jv[i]);
    }
    pack.min_jacobian = min_j;
    pack.diffeomorphic = min_j > 0.0;
    if (pack.diffeomorphic)
        for (std::size_t i = 0; i < jv.size(); ++i) ij[i] = 1.0 / jv[i];
    pack.J = SlabField::from_values(g, std::move(jv));
    pack.invJ = pack.diffeomorphic ? SlabField::from_values(g, std::move(ij)) : SlabField(g);
    return pack;
}

SurfaceField mean_curvature(const SurfaceField& eta) {
    const Grid& base = eta.grid();
    const Grid fine = base.refined();
    const SurfaceField slope = eta.derivative().resample(fine);
    std::vector<double> w(fine.nx);
    for (std::size_t i = 0; i < fine.nx; ++i) {
        const double s = slope.value(i);
        w[i] = s / std::sqrt(1.0 + s * s);
    }
    return SurfaceField::from_values(fine, std::move(w)).derivative().resample(base);
}

}  // namespace strata
