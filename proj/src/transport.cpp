#include "strata/transport.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <numbers>

#include "strata/errors.hpp"
#include "strata/fft.hpp"
#include "strata/kernels.hpp"
#include "strata/pipeline.hpp"

namespace strata {

namespace {

using pipeline::Vec;

bool regularized(const TransportProblem& p) {
    return p.m >= 1 && p.N > 0.0 && std::isfinite(p.N);
}

// real mode-dof packing for a single slab scalar (same convention as the
// solution dof map: mean, then cos/sin pairs, Nyquist dropped)
struct ScalarDofs {
    const Grid& g;
    std::size_t size() const { return (g.nx - 1) * g.nz; }

    Eigen::VectorXd pack(const SlabField& f) const {
        const std::size_t nz = g.nz;
        Eigen::VectorXd v(size());
        for (std::size_t md = 0; md < g.nx - 1; ++md) {
            const std::size_t k = (md + 1) / 2;
            const bool sin_part = md != 0 && md % 2 == 0;
            for (std::size_t iz = 0; iz < nz; ++iz) {
                const Complex c = f.coeff(iz, k);
                v[md * nz + iz] =
                    md == 0 ? c.real() : (sin_part ? -2.0 * c.imag() : 2.0 * c.real());
            }
        }
        return v;
    }

    SlabField unpack(const Eigen::VectorXd& v) const {
        const std::size_t nz = g.nz;
        const std::size_t ns = fft::spectrum_size(g.nx);
        std::vector<Complex> spec(nz * ns, 0.0);
        for (std::size_t md = 0; md < g.nx - 1; ++md) {
            const std::size_t k = (md + 1) / 2;
            const Complex unit = md == 0 ? Complex(1.0, 0.0)
                                         : (md % 2 == 1 ? Complex(0.5, 0.0) : Complex(0.0, -0.5));
            for (std::size_t iz = 0; iz < nz; ++iz) spec[iz * ns + k] += unit * v[md * nz + iz];
        }
        std::vector<double> vals(g.nx * nz);
        for (std::size_t iz = 0; iz < nz; ++iz)
            fft::inverse(spec.data() + iz * ns, g.nx, vals.data() + iz * g.nx);
        return SlabField::from_values(g, std::move(vals));
    }
};

}  // namespace

SlabField steady_transport_apply(const TransportProblem& prob, const SlabField& f) {
    const Grid& base = f.grid();
    const Grid fine = base.refined();
    const Vec ff = f.resample(fine).values();
    const Vec l0 = prob.lambda0.resample(fine).values();
    const Vec l1 = prob.lambda1.resample(fine).values();
    const Vec x0 = prob.X[0].resample(fine).values();
    const Vec x1 = prob.X[1].resample(fine).values();

    Vec out = pipeline::mul(l0, ff);
    const Vec flux0 = pipeline::mul(pipeline::mul(l1, x0), ff);
    const Vec flux1 = pipeline::mul(pipeline::mul(l1, x1), ff);
    out = pipeline::add(out, pipeline::dx_slab(fine, flux0));
    out = pipeline::add(out, pipeline::dz_slab(fine, flux1));

    if (regularized(prob)) {
        const std::size_t ns = fft::spectrum_size(fine.nx);
        std::vector<Complex> level(ns);
        Vec lm(ff.size(), 0.0);
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t iz = 0; iz < fine.nz; ++iz) {
            fft::forward(ff.data() + iz * fine.nx, fine.nx, level.data());
            for (std::size_t k = 0; k < ns; ++k)
                level[k] *= std::pow(two_pi * fine.xi(k), 2.0 * prob.m);
            fft::inverse(level.data(), fine.nx, lm.data() + iz * fine.nx);
        }
        Vec vert = ff;
        for (int p = 0; p < 2 * prob.m; ++p) vert = pipeline::dz_slab(fine, vert);
        const double sign = (prob.m % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < lm.size(); ++i) out[i] += (lm[i] + sign * vert[i]) / prob.N;
    }
    return pipeline::restrict_slab(base, fine, out);
}

SlabField steady_transport_solve(const TransportProblem& prob, const SlabField& psi) {
    const Grid& g = psi.grid();
    const std::size_t nz = g.nz;
    const int m = prob.m;
    const bool reg = regularized(prob);
    if (reg && 2 * static_cast<std::size_t>(m) >= nz)
        throw SolveError("steady transport: vertical grid too coarse for the Neumann rows");

    const ScalarDofs dofs{g};
    const std::size_t n = dofs.size();

    // equation rows: interior collocation plus Neumann replacements near the
    // boundaries (regularized only)
    auto pack_rows = [&](const SlabField& image, const SlabField& dir) {
        Eigen::VectorXd v = dofs.pack(image);
        if (reg) {
            SlabField der = dir;
            std::vector<Eigen::VectorXd> traces;
            for (int p = 1; p <= 2 * m - 1; ++p) {
                der = der.dz();
                if (p >= m) {
                    // bottom and top Neumann traces as mode dofs
                    const auto sb = der.bottom_trace().spectrum();
                    const auto st = der.top_trace().spectrum();
                    Eigen::VectorXd tb(g.nx - 1), tt(g.nx - 1);
                    for (std::size_t md = 0; md < g.nx - 1; ++md) {
                        const std::size_t k = (md + 1) / 2;
                        const bool sin_part = md != 0 && md % 2 == 0;
                        tb[md] = md == 0 ? sb[k].real()
                                         : (sin_part ? -2.0 * sb[k].imag() : 2.0 * sb[k].real());
                        tt[md] = md == 0 ? st[k].real()
                                         : (sin_part ? -2.0 * st[k].imag() : 2.0 * st[k].real());
                    }
                    traces.push_back(tb);
                    traces.push_back(tt);
                }
            }
            for (std::size_t md = 0; md < g.nx - 1; ++md)
                for (int p = 0; p < m; ++p) {
                    v[md * nz + p] = traces[2 * p][md];
                    v[md * nz + (nz - 1 - p)] = traces[2 * p + 1][md];
                }
        }
        return v;
    };

    std::vector<std::vector<std::pair<int, double>>> cols(n);
    kernels::map_index(n, [&](std::size_t j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = 1.0;
        const SlabField basis = dofs.unpack(e);
        const SlabField image = steady_transport_apply(prob, basis);
        const Eigen::VectorXd col = pack_rows(image, basis);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(col[i]));
        const double drop = 1e-14 * scale;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(col[i]) > drop) cols[j].emplace_back(static_cast<int>(i), col[i]);
    });

    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [i, v] : cols[j]) trips.emplace_back(i, static_cast<int>(j), v);
    Eigen::SparseMatrix<double> mat(static_cast<int>(n), static_cast<int>(n));
    mat.setFromTriplets(trips.begin(), trips.end());
    mat.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(mat);
    lu.factorize(mat);
    if (lu.info() != Eigen::Success) throw SolveError("steady transport: singular system");

    Eigen::VectorXd rhs = dofs.pack(psi);
    if (reg)
        for (std::size_t md = 0; md < g.nx - 1; ++md)
            for (int p = 0; p < m; ++p) {
                rhs[md * nz + p] = 0.0;
                rhs[md * nz + (nz - 1 - p)] = 0.0;
            }
    Eigen::VectorXd x = lu.solve(rhs);
    x += lu.solve(rhs - mat * x);
    return dofs.unpack(x);
}

}  // namespace strata
