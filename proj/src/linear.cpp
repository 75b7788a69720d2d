#include "strata/linear.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "strata/errors.hpp"
#include "strata/fft.hpp"
#include "strata/kernels.hpp"

namespace strata {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t mode_dofs(const Grid& g) { return g.nx - 1; }

struct ModeId {
    std::size_t k;
    int parity;  // 0 = cos, 1 = sin
};
ModeId mode_of(std::size_t md) {
    if (md == 0) return {0, 0};
    return {(md + 1) / 2, md % 2 == 1 ? 0 : 1};
}

double encode_coeff(const Complex& c, const ModeId& m) {
    if (m.k == 0) return c.real();
    return m.parity == 0 ? 2.0 * c.real() : -2.0 * c.imag();
}

// Functional extracting the highest vertical Chebyshev coefficient from
// nodal values (endpoints halved).  Used to pin the spurious collocation
// kernel of the k = 0 block: the true solution's top coefficient sits at
// truncation level, so the pin perturbs it by roundoff only, unlike a pin
// of the physical mean.
double top_cheb_weight(std::size_t j, std::size_t nz) {
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == nz - 1) w *= 0.5;
    return w * 2.0 / static_cast<double>(nz - 1);
}

}  // namespace

Background make_background(const State& w0, const Forcing& forcing,
                           const PhysicalParams& params, const EquilibriumProfile& profile) {
    Background bg{w0, forcing, params, profile, nullptr};
    bg.core =
        std::make_shared<pipeline::Core>(pipeline::build_core(w0, forcing, params, profile));
    return bg;
}

Residual derivative_apply(const Background& bg, const State& dir, const Forcing* forcing_dir,
                          double gamma_dir) {
    return pipeline::evaluate_derivative(*bg.core, dir, forcing_dir, gamma_dir);
}

std::array<SlabField, 2> v_field(const Background& bg) {
    return pipeline::v_field_base(*bg.core);
}

Residual principal_apply(const Background& bg, const State& dir, const PrincipalOptions& opt) {
    return pipeline::evaluate_principal(*bg.core, dir, opt);
}

// ---------------------------------------------------------------------------
// DofMap

DofMap::DofMap(const Grid& g, const PrincipalOptions& reg) : grid_(g), reg_(reg) {
    size_ = 3 * g.nz + (mode_dofs(g) - 1) * (3 * g.nz + 1);
}

std::size_t DofMap::block_(std::size_t md) const {
    return md == 0 ? 0 : 3 * grid_.nz + (md - 1) * (3 * grid_.nz + 1);
}

VectorXd DofMap::pack_state(const State& w) const {
    const std::size_t nz = grid_.nz;
    VectorXd v = VectorXd::Zero(size_);
    const auto& eta_spec = w.eta.spectrum();
    for (std::size_t md = 0; md < mode_dofs(grid_); ++md) {
        const ModeId m = mode_of(md);
        const std::size_t off = block_(md);
        for (std::size_t iz = 0; iz < nz; ++iz) {
            v[off + iz] = encode_coeff(w.q.coeff(iz, m.k), m);
            v[off + nz + iz] = encode_coeff(w.u[0].coeff(iz, m.k), m);
            v[off + 2 * nz + iz] = encode_coeff(w.u[1].coeff(iz, m.k), m);
        }
        if (md > 0) v[off + 3 * nz] = encode_coeff(eta_spec[m.k], m);
    }
    return v;
}

State DofMap::unpack_state(const VectorXd& v) const {
    const std::size_t nz = grid_.nz;
    const std::size_t ns = fft::spectrum_size(grid_.nx);
    std::vector<Complex> qs(nz * ns, 0.0), u0s(nz * ns, 0.0), u1s(nz * ns, 0.0);
    std::vector<Complex> etas(ns, 0.0);
    for (std::size_t md = 0; md < mode_dofs(grid_); ++md) {
        const ModeId m = mode_of(md);
        const std::size_t off = block_(md);
        const Complex unit = m.k == 0 ? Complex(1.0, 0.0)
                                      : (m.parity == 0 ? Complex(0.5, 0.0) : Complex(0.0, -0.5));
        for (std::size_t iz = 0; iz < nz; ++iz) {
            qs[iz * ns + m.k] += unit * v[off + iz];
            u0s[iz * ns + m.k] += unit * v[off + nz + iz];
            u1s[iz * ns + m.k] += unit * v[off + 2 * nz + iz];
        }
        if (md > 0) etas[m.k] += unit * v[off + 3 * nz];
    }
    auto slab_from = [&](const std::vector<Complex>& spec) {
        std::vector<double> vals(grid_.nx * nz);
        for (std::size_t iz = 0; iz < nz; ++iz)
            fft::inverse(spec.data() + iz * ns, grid_.nx, vals.data() + iz * grid_.nx);
        return SlabField::from_values(grid_, std::move(vals));
    };
    State w(grid_);
    w.q = slab_from(qs);
    w.u[0] = slab_from(u0s);
    w.u[1] = slab_from(u1s);
    w.eta = SurfaceField::from_spectrum(grid_, etas);
    return w;
}

VectorXd DofMap::pack_data(const Residual& r) const { return pack_equation(r, State(grid_)); }

VectorXd DofMap::pack_equation(const Residual& image, const State& dir) const {
    const std::size_t nz = grid_.nz;
    const int m = reg_.m;
    const bool regularized = m >= 2 && reg_.N > 0.0;
    VectorXd v = VectorXd::Zero(size_);

    const SurfaceField bottom0 = dir.u[0].bottom_trace();
    const SurfaceField bottom1 = dir.u[1].bottom_trace();
    SurfaceField kin = dir.u[1].top_trace();
    kin += dir.eta.derivative();
    if (regularized) {
        const auto& es = dir.eta.spectrum();
        std::vector<Complex> frac(es.size(), 0.0);
        for (std::size_t k = 1; k <= grid_.max_mode(); ++k)
            frac[k] = std::pow(kTwoPi * grid_.xi(k), 2.0 * m - 0.5) * es[k];
        kin -= (1.0 / reg_.N) * SurfaceField::from_spectrum(grid_, frac);
    }
    double q_pin = 0.0;
    {
        const auto& qs = dir.q.spectrum();
        const std::size_t ns = fft::spectrum_size(grid_.nx);
        for (std::size_t j = 0; j < nz; ++j)
            q_pin += top_cheb_weight(j, nz) * qs[j * ns].real();
    }

    std::vector<SurfaceField> neum_bot, neum_top;
    if (regularized) {
        SlabField der = dir.q;
        for (int p = 1; p <= 2 * m - 1; ++p) {
            der = der.dz();
            if (p >= m) {
                neum_bot.push_back(der.bottom_trace());
                neum_top.push_back(der.top_trace());
            }
        }
    }

    for (std::size_t md = 0; md < mode_dofs(grid_); ++md) {
        const ModeId mo = mode_of(md);
        const std::size_t off = block_(md);

        for (std::size_t iz = 0; iz < nz; ++iz) {
            double val;
            if (regularized && iz < static_cast<std::size_t>(m))
                val = encode_coeff(neum_bot[iz].spectrum()[mo.k], mo);
            else if (regularized && iz >= nz - m)
                val = encode_coeff(neum_top[iz - (nz - m)].spectrum()[mo.k], mo);
            else if (!regularized && md == 0 && iz == nz - 1)
                val = q_pin;  // pin replaces the top k = 0 collocation row
            else
                val = encode_coeff(image.g.coeff(iz, mo.k), mo);
            v[off + iz] = val;
        }
        for (int comp = 0; comp < 2; ++comp) {
            const std::size_t base = off + (1 + comp) * nz;
            const SurfaceField& bot = comp == 0 ? bottom0 : bottom1;
            v[base] = encode_coeff(bot.spectrum()[mo.k], mo);
            for (std::size_t iz = 1; iz + 1 < nz; ++iz)
                v[base + iz] = encode_coeff(image.f[comp].coeff(iz, mo.k), mo);
            v[base + nz - 1] = encode_coeff(image.k[comp].spectrum()[mo.k], mo);
        }
        if (md > 0) v[off + 3 * nz] = encode_coeff(kin.spectrum()[mo.k], mo);
    }
    return v;
}

// ---------------------------------------------------------------------------
// ModeBlockOperator

namespace {

// Per-mode symbol of the principal part at the trivial background.  Column
// layout [q, u0, u1, eta]; rows follow DofMap.
MatrixXcd mode_block(const Grid& g, const PhysicalParams& params,
                     const EquilibriumProfile& profile, double gamma,
                     const PrincipalOptions& reg, std::size_t k) {
    const std::size_t nz = g.nz;
    const bool has_eta = k > 0;
    const std::size_t dim = 3 * nz + (has_eta ? 1 : 0);
    const bool regularized = reg.m >= 2 && reg.N > 0.0;
    const double grav = params.gravity;
    const double varsigma = params.surface_tension;
    const Complex iota(0.0, kTwoPi * g.xi(k));
    const double xi_abs = kTwoPi * g.xi(k);

    const auto& rho = profile.density_nodes();
    const auto& drho = profile.density_slope_nodes();
    std::vector<double> mu(nz), lam(nz);
    for (std::size_t j = 0; j < nz; ++j) {
        mu[j] = params.viscosity.mu(rho[j]);
        lam[j] = params.viscosity.lambda(rho[j]);
    }

    MatrixXd D(nz, nz);
    const auto& draw = g.vertical().diff_matrix();
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = 0; j < nz; ++j) D(i, j) = draw[i * nz + j];
    MatrixXd DdiagmuD(nz, nz), DdiaglamD(nz, nz), Ddiagmu(nz, nz), Ddiaglam(nz, nz);
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = 0; j < nz; ++j) {
            Ddiagmu(i, j) = D(i, j) * mu[j];
            Ddiaglam(i, j) = D(i, j) * lam[j];
        }
    DdiagmuD = Ddiagmu * D;
    DdiaglamD = Ddiaglam * D;
    MatrixXd Dpow = MatrixXd::Identity(nz, nz);
    if (regularized)
        for (int p = 0; p < 2 * reg.m; ++p) Dpow = D * Dpow;

    const std::size_t qo = 0, uo = nz, vo = 2 * nz, eo = 3 * nz;
    MatrixXcd B = MatrixXcd::Zero(dim, dim);

    // continuity rows
    for (std::size_t iz = 0; iz < nz; ++iz) {
        const std::size_t row = qo + iz;
        if (regularized && (iz < static_cast<std::size_t>(reg.m) || iz >= nz - reg.m)) {
            const int p = iz < static_cast<std::size_t>(reg.m)
                              ? reg.m + static_cast<int>(iz)
                              : reg.m + static_cast<int>(iz - (nz - reg.m));
            const std::size_t node = iz < static_cast<std::size_t>(reg.m) ? 0 : nz - 1;
            MatrixXd Dp = MatrixXd::Identity(nz, nz);
            for (int pw = 0; pw < p; ++pw) Dp = D * Dp;
            for (std::size_t j = 0; j < nz; ++j) B(row, qo + j) = Dp(node, j);
            continue;
        }
        if (!regularized && k == 0 && iz == nz - 1) {
            for (std::size_t j = 0; j < nz; ++j) B(row, qo + j) = top_cheb_weight(j, nz);
            continue;
        }
        B(row, qo + iz) += reg.tau * (drho[iz] / grav) * iota;
        B(row, uo + iz) += iota * rho[iz];
        for (std::size_t j = 0; j < nz; ++j) B(row, vo + j) += D(iz, j) * rho[j];
        if (has_eta) B(row, eo) += reg.tau * drho[iz] * iota;
        if (regularized) {
            const double xfac = std::pow(xi_abs, 2.0 * reg.m) / reg.N;
            const double sign = (reg.m % 2 == 0) ? 1.0 : -1.0;
            B(row, qo + iz) += xfac;
            for (std::size_t j = 0; j < nz; ++j) B(row, qo + j) += sign / reg.N * Dpow(iz, j);
            if (has_eta) B(row, eo) += xfac * grav;
        }
    }

    // momentum-x rows
    B(uo + 0, uo + 0) = 1.0;
    for (std::size_t iz = 1; iz + 1 < nz; ++iz) {
        const std::size_t row = uo + iz;
        B(row, uo + iz) += -gamma * gamma * rho[iz] * iota;
        B(row, qo + iz) += rho[iz] * iota;
        if (has_eta) B(row, eo) += rho[iz] * grav * iota;
        // viscous: iota[(mu+lam) iota u0 + (lam-mu) D u1] + D diag(mu) (D u0 + iota u1)
        B(row, uo + iz) -= gamma * iota * iota * (mu[iz] + lam[iz]);
        for (std::size_t j = 0; j < nz; ++j) {
            B(row, vo + j) -= gamma * iota * (lam[iz] - mu[iz]) * D(iz, j);
            B(row, uo + j) -= gamma * DdiagmuD(iz, j);
            B(row, vo + j) -= gamma * iota * Ddiagmu(iz, j);
        }
    }
    // dynamic boundary condition, tangential component
    {
        const std::size_t row = uo + nz - 1, t = nz - 1;
        for (std::size_t j = 0; j < nz; ++j) B(row, uo + j) += gamma * mu[t] * D(t, j);
        B(row, vo + t) += gamma * mu[t] * iota;
    }

    // momentum-y rows
    B(vo + 0, vo + 0) = 1.0;
    for (std::size_t iz = 1; iz + 1 < nz; ++iz) {
        const std::size_t row = vo + iz;
        B(row, vo + iz) += -gamma * gamma * rho[iz] * iota;
        for (std::size_t j = 0; j < nz; ++j) B(row, qo + j) += rho[iz] * D(iz, j);
        // viscous: iota mu (D u0 + iota u1) + D[diag(mu)(D u1 - iota u0) + diag(lam)(iota u0 + D u1)]
        B(row, vo + iz) -= gamma * iota * iota * mu[iz];
        for (std::size_t j = 0; j < nz; ++j) {
            B(row, uo + j) -= gamma * iota * (mu[iz] * D(iz, j) + Ddiaglam(iz, j) - Ddiagmu(iz, j));
            B(row, vo + j) -= gamma * (DdiagmuD(iz, j) + DdiaglamD(iz, j));
        }
    }
    // dynamic boundary condition, normal component
    {
        const std::size_t row = vo + nz - 1, t = nz - 1;
        B(row, qo + t) += -rho[t];
        B(row, uo + t) += gamma * (lam[t] - mu[t]) * iota;
        for (std::size_t j = 0; j < nz; ++j) B(row, vo + j) += gamma * (mu[t] + lam[t]) * D(t, j);
        if (has_eta) B(row, eo) += varsigma * xi_abs * xi_abs;
    }

    if (has_eta) {
        const std::size_t row = eo, t = nz - 1;
        B(row, vo + t) = 1.0;
        B(row, eo) = iota;
        if (regularized) B(row, eo) -= std::pow(xi_abs, 2.0 * reg.m - 0.5) / reg.N;
    }
    return B;
}

}  // namespace

ModeBlockOperator::ModeBlockOperator(const Grid& g, const PhysicalParams& params,
                                     const EquilibriumProfile& profile, double gamma,
                                     const PrincipalOptions& reg)
    : grid_(g), map_(g, reg), gamma_(gamma), reg_(reg) {
    const std::size_t kmax = g.max_mode();
    lu_.resize(kmax);
    kernels::map_index(kmax, [&](std::size_t idx) {
        lu_[idx] = Eigen::PartialPivLU<MatrixXcd>(
            mode_block(g, params, profile, gamma, reg, idx + 1));
    });
    const MatrixXcd b0 = mode_block(g, params, profile, gamma, reg, 0);
    lu0_ = Eigen::PartialPivLU<MatrixXd>(b0.real());
}

State ModeBlockOperator::solve(const Residual& data) const {
    const Grid& g = grid_;
    const std::size_t nz = g.nz;
    const std::size_t ns = fft::spectrum_size(g.nx);
    const int m = reg_.m;
    const bool regularized = m >= 2 && reg_.N > 0.0;

    std::vector<Complex> qs(nz * ns, 0.0), u0s(nz * ns, 0.0), u1s(nz * ns, 0.0), etas(ns, 0.0);

    auto fill_rhs = [&](std::size_t k, VectorXcd& rhs) {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const bool neumann_row =
                regularized && (iz < static_cast<std::size_t>(m) || iz >= nz - m);
            const bool pin_row = !regularized && k == 0 && iz == nz - 1;
            rhs[iz] = (neumann_row || pin_row) ? 0.0 : data.g.coeff(iz, k);
        }
        for (int comp = 0; comp < 2; ++comp) {
            const std::size_t base = (1 + comp) * nz;
            rhs[base] = 0.0;
            for (std::size_t iz = 1; iz + 1 < nz; ++iz)
                rhs[base + iz] = data.f[comp].coeff(iz, k);
            rhs[base + nz - 1] = data.k[comp].spectrum()[k];
        }
        if (k > 0) rhs[3 * nz] = 0.0;
    };

    kernels::map_index(g.max_mode() + 1, [&](std::size_t k) {
        if (k == 0) {
            VectorXcd rhs(3 * nz);
            fill_rhs(0, rhs);
            VectorXd sol = lu0_.solve(rhs.real());
            for (std::size_t iz = 0; iz < nz; ++iz) {
                qs[iz * ns] = sol[iz];
                u0s[iz * ns] = sol[nz + iz];
                u1s[iz * ns] = sol[2 * nz + iz];
            }
        } else {
            VectorXcd rhs(3 * nz + 1);
            fill_rhs(k, rhs);
            VectorXcd sol = lu_[k - 1].solve(rhs);
            for (std::size_t iz = 0; iz < nz; ++iz) {
                qs[iz * ns + k] = sol[iz];
                u0s[iz * ns + k] = sol[nz + iz];
                u1s[iz * ns + k] = sol[2 * nz + iz];
            }
            etas[k] = sol[3 * nz];
        }
    });

    auto slab_from = [&](const std::vector<Complex>& spec) {
        std::vector<double> vals(g.nx * nz);
        for (std::size_t iz = 0; iz < nz; ++iz)
            fft::inverse(spec.data() + iz * ns, g.nx, vals.data() + iz * g.nx);
        return SlabField::from_values(g, std::move(vals));
    };
    State w(g);
    w.q = slab_from(qs);
    w.u[0] = slab_from(u0s);
    w.u[1] = slab_from(u1s);
    w.eta = SurfaceField::from_spectrum(g, etas);
    return w;
}

// ---------------------------------------------------------------------------
// AssembledOperator

VectorXd AssembledOperator::solve_vec(const VectorXd& rhs) const {
    VectorXd x = lu_->solve(rhs);
    const VectorXd r = rhs - mat_ * x;
    x += lu_->solve(r);
    return x;
}

State AssembledOperator::solve(const Residual& data) const {
    return map_.unpack_state(solve_vec(map_.pack_data(data)));
}

void AssembledOperator::dump_coordinate(const std::string& path) const {
    std::ofstream out(path);
    for (int c = 0; c < mat_.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, c); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

AssembledOperator assemble(const Background& bg, const PrincipalOptions& reg, bool full) {
    AssembledOperator op;
    op.map_ = DofMap(bg.grid(), reg);
    const std::size_t n = op.map_.size();
    const bool regularized = reg.m >= 2 && reg.N > 0.0;

    std::vector<std::vector<std::pair<int, double>>> cols(n);
    kernels::map_index(n, [&](std::size_t j) {
        VectorXd e = VectorXd::Zero(n);
        e[j] = 1.0;
        const State basis = op.map_.unpack_state(e);
        Residual image = full ? pipeline::evaluate_derivative(*bg.core, basis, nullptr, 0.0)
                              : pipeline::evaluate_principal(*bg.core, basis, reg);
        if (full && regularized)
            image.g += pipeline::regularization_term(*bg.core, basis, reg.m, reg.N);
        const VectorXd col = op.map_.pack_equation(image, basis);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(col[i]));
        const double drop = 1e-14 * scale;
        auto& entries = cols[j];
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(col[i]) > drop) entries.emplace_back(static_cast<int>(i), col[i]);
    });

    std::vector<Eigen::Triplet<double>> trips;
    std::size_t nnz = 0;
    for (const auto& c : cols) nnz += c.size();
    trips.reserve(nnz);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [i, v] : cols[j]) trips.emplace_back(i, static_cast<int>(j), v);
    op.mat_.resize(static_cast<int>(n), static_cast<int>(n));
    op.mat_.setFromTriplets(trips.begin(), trips.end());
    op.mat_.makeCompressed();

    op.lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    op.lu_->analyzePattern(op.mat_);
    op.lu_->factorize(op.mat_);
    if (op.lu_->info() != Eigen::Success)
        throw SolveError("assemble: sparse factorization failed (operator singular?)");

    // cheap condition estimate from a probe solve
    VectorXd probe = VectorXd::Ones(n);
    const VectorXd sol = op.lu_->solve(probe);
    double amax = 0.0;
    for (int c = 0; c < op.mat_.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.mat_, c); it; ++it)
            amax = std::max(amax, std::abs(it.value()));
    op.cond_ = amax * sol.lpNorm<Eigen::Infinity>();
    return op;
}

State solve(const AssembledOperator& op, const Residual& data) { return op.solve(data); }

// ---------------------------------------------------------------------------
// DerivativeSolver

DerivativeSolver::DerivativeSolver(const Background& bg,
                                   std::shared_ptr<const ModeBlockOperator> pre)
    : bg_(bg), pre_(std::move(pre)) {}

State DerivativeSolver::solve(const Residual& y, SolveStats* stats) const {
    const DofMap& map = pre_->dofs();
    const VectorXd rhs = map.pack_data(y);
    const double target = std::max(1e-13 * rhs.norm(), 1e-300);

    State x = pre_->solve(y);
    double res_norm = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int stalls = 0;
    int it = 0;
    for (; it < 60; ++it) {
        Residual r = y;
        r.add_scaled(-1.0, derivative_apply(bg_, x));
        res_norm = map.pack_data(r).norm();
        if (res_norm <= target) break;
        if (res_norm > 0.7 * prev) {
            if (++stalls >= 3) break;
        } else {
            stalls = 0;
        }
        prev = res_norm;
        x.add_scaled(1.0, pre_->solve(r));
    }

    // a roundoff-level plateau above the nominal target is still a solve
    if (res_norm > 1e-10 * std::max(rhs.norm(), 1e-300)) {
        // contraction stalled (background too far from equilibrium for the
        // trivial preconditioner); fall back to a direct factorization
        if (!fallback_)
            fallback_ = std::make_shared<AssembledOperator>(assemble(bg_, PrincipalOptions{}, true));
        x = fallback_->solve(y);
        Residual r = y;
        r.add_scaled(-1.0, derivative_apply(bg_, x));
        res_norm = map.pack_data(r).norm();
        if (stats) stats->used_fallback = true;
    }
    if (stats) {
        stats->iterations = it;
        stats->residual = res_norm;
    }
    return x;
}

}  // namespace strata
