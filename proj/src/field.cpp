#include "strata/field.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "strata/fft.hpp"
#include "strata/kernels.hpp"

namespace strata {

namespace {

void check_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("field: grid mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// SurfaceField

SurfaceField::SurfaceField(const Grid& g) : grid_(g), values_(g.nx, 0.0) {
    spec_.assign(fft::spectrum_size(g.nx), 0.0);
    spec_valid_ = true;
}

SurfaceField SurfaceField::from_values(const Grid& g, std::vector<double> v) {
    if (v.size() != g.nx) throw std::invalid_argument("surface field: size mismatch");
    SurfaceField f(g);
    f.spec_.resize(fft::spectrum_size(g.nx));
    fft::forward(v.data(), g.nx, f.spec_.data());
    fft::inverse(f.spec_.data(), g.nx, v.data());  // strips Nyquist content
    f.values_ = std::move(v);
    f.spec_valid_ = true;
    return f;
}

SurfaceField SurfaceField::from_spectrum(const Grid& g, const std::vector<Complex>& half) {
    if (half.size() != fft::spectrum_size(g.nx))
        throw std::invalid_argument("surface field: spectrum size mismatch");
    SurfaceField f(g);
    f.spec_ = half;
    if (g.nx % 2 == 0) f.spec_[g.nx / 2] = 0.0;
    fft::inverse(f.spec_.data(), g.nx, f.values_.data());
    f.spec_valid_ = true;
    return f;
}

const std::vector<Complex>& SurfaceField::spectrum() const {
    if (!spec_valid_) {
        spec_.resize(fft::spectrum_size(grid_.nx));
        fft::forward(values_.data(), grid_.nx, spec_.data());
        spec_valid_ = true;
    }
    return spec_;
}

double SurfaceField::mean() const { return spectrum()[0].real(); }

SurfaceField& SurfaceField::remove_mean() {
    const double m = mean();
    for (double& v : values_) v -= m;
    spec_valid_ = false;
    return *this;
}

SurfaceField SurfaceField::derivative() const {
    const auto& s = spectrum();
    std::vector<Complex> out(s.size(), 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
        out[k] = Complex(0.0, two_pi * grid_.xi(k)) * s[k];
    return from_spectrum(grid_, out);
}

SurfaceField SurfaceField::resample(const Grid& g) const {
    if (g.L != grid_.L) throw std::invalid_argument("resample: period mismatch");
    const auto& s = spectrum();
    std::vector<Complex> out(fft::spectrum_size(g.nx), 0.0);
    const std::size_t kmax = std::min(grid_.max_mode(), g.max_mode());
    for (std::size_t k = 0; k <= kmax; ++k) out[k] = s[k];
    return from_spectrum(g, out);
}

SurfaceField& SurfaceField::operator+=(const SurfaceField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(1.0, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
    return *this;
}

SurfaceField& SurfaceField::operator-=(const SurfaceField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(-1.0, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
    return *this;
}

SurfaceField& SurfaceField::operator*=(double s) {
    for (double& v : values_) v *= s;
    spec_valid_ = false;
    return *this;
}

void SurfaceField::add_scaled(double s, const SurfaceField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(s, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
}

// ---------------------------------------------------------------------------
// SlabField

SlabField::SlabField(const Grid& g) : grid_(g), values_(g.nx * g.nz, 0.0) {
    spec_.assign(g.nz * fft::spectrum_size(g.nx), 0.0);
    spec_valid_ = true;
}

SlabField SlabField::from_values(const Grid& g, std::vector<double> v) {
    if (v.size() != g.nx * g.nz) throw std::invalid_argument("slab field: size mismatch");
    SlabField f(g);
    const std::size_t ns = fft::spectrum_size(g.nx);
    f.spec_.resize(g.nz * ns);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        fft::forward(v.data() + iz * g.nx, g.nx, f.spec_.data() + iz * ns);
        fft::inverse(f.spec_.data() + iz * ns, g.nx, v.data() + iz * g.nx);
    }
    f.values_ = std::move(v);
    f.spec_valid_ = true;
    return f;
}

const std::vector<Complex>& SlabField::spectrum() const {
    if (!spec_valid_) {
        const std::size_t ns = fft::spectrum_size(grid_.nx);
        spec_.resize(grid_.nz * ns);
        for (std::size_t iz = 0; iz < grid_.nz; ++iz)
            fft::forward(values_.data() + iz * grid_.nx, grid_.nx, spec_.data() + iz * ns);
        spec_valid_ = true;
    }
    return spec_;
}

Complex SlabField::coeff(std::size_t iz, std::size_t k) const {
    return spectrum()[iz * fft::spectrum_size(grid_.nx) + k];
}

SurfaceField SlabField::top_trace() const {
    std::vector<double> v(values_.end() - grid_.nx, values_.end());
    return SurfaceField::from_values(grid_, std::move(v));
}

SurfaceField SlabField::bottom_trace() const {
    std::vector<double> v(values_.begin(), values_.begin() + grid_.nx);
    return SurfaceField::from_values(grid_, std::move(v));
}

SlabField SlabField::dx() const {
    const auto& s = spectrum();
    const std::size_t ns = fft::spectrum_size(grid_.nx);
    SlabField out(grid_);
    out.spec_.resize(s.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t iz = 0; iz < grid_.nz; ++iz) {
        for (std::size_t k = 0; k < ns; ++k)
            out.spec_[iz * ns + k] = Complex(0.0, two_pi * grid_.xi(k)) * s[iz * ns + k];
        if (grid_.nx % 2 == 0) out.spec_[iz * ns + grid_.nx / 2] = 0.0;
        fft::inverse(out.spec_.data() + iz * ns, grid_.nx, out.values_.data() + iz * grid_.nx);
    }
    out.spec_valid_ = true;
    return out;
}

SlabField SlabField::dz() const {
    SlabField out(grid_);
    kernels::apply_columns(grid_.vertical().diff_matrix().data(), grid_.nz, grid_.nx,
                           values_.data(), out.values_.data());
    out.spec_valid_ = false;
    return out;
}

SurfaceField SlabField::integrate_vertical() const {
    const auto& w = grid_.vertical().quad_weights();
    std::vector<double> acc(grid_.nx, 0.0);
    for (std::size_t iz = 0; iz < grid_.nz; ++iz)
        kernels::axpy(w[iz], values_.data() + iz * grid_.nx, acc.data(), grid_.nx);
    return SurfaceField::from_values(grid_, std::move(acc));
}

SlabField SlabField::resample(const Grid& g) const {
    if (g.L != grid_.L || g.nz != grid_.nz || g.depth != grid_.depth)
        throw std::invalid_argument("resample: incompatible grids");
    const auto& s = spectrum();
    const std::size_t ns_in = fft::spectrum_size(grid_.nx);
    const std::size_t ns_out = fft::spectrum_size(g.nx);
    const std::size_t kmax = std::min(grid_.max_mode(), g.max_mode());
    SlabField out(g);
    out.spec_.assign(g.nz * ns_out, 0.0);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
        for (std::size_t k = 0; k <= kmax; ++k)
            out.spec_[iz * ns_out + k] = s[iz * ns_in + k];
        fft::inverse(out.spec_.data() + iz * ns_out, g.nx, out.values_.data() + iz * g.nx);
    }
    out.spec_valid_ = true;
    return out;
}

SlabField& SlabField::operator+=(const SlabField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(1.0, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
    return *this;
}

SlabField& SlabField::operator-=(const SlabField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(-1.0, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
    return *this;
}

SlabField& SlabField::operator*=(double s) {
    for (double& v : values_) v *= s;
    spec_valid_ = false;
    return *this;
}

void SlabField::add_scaled(double s, const SlabField& o) {
    check_same_grid(grid_, o.grid_);
    kernels::axpy(s, o.values_.data(), values_.data(), values_.size());
    spec_valid_ = false;
}

SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
SurfaceField operator*(double s, SurfaceField a) { return a *= s; }
SlabField operator+(SlabField a, const SlabField& b) { return a += b; }
SlabField operator-(SlabField a, const SlabField& b) { return a -= b; }
SlabField operator*(double s, SlabField a) { return a *= s; }

SurfaceField pointwise(const SurfaceField& a, const SurfaceField& b) {
    check_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.size());
    kernels::multiply(a.values().data(), b.values().data(), v.data(), v.size());
    return SurfaceField::from_values(a.grid(), std::move(v));
}

SlabField pointwise(const SlabField& a, const SlabField& b) {
    check_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.size());
    kernels::multiply(a.values().data(), b.values().data(), v.data(), v.size());
    return SlabField::from_values(a.grid(), std::move(v));
}

// ---------------------------------------------------------------------------
// Surface2Field

Surface2Field::Surface2Field(double L1, double L2, std::size_t n1, std::size_t n2)
    : L1_(L1), L2_(L2), n1_(n1), n2_(n2), values_(n1 * n2, 0.0) {}

Surface2Field Surface2Field::from_values(double L1, double L2, std::size_t n1, std::size_t n2,
                                         std::vector<double> v) {
    if (v.size() != n1 * n2) throw std::invalid_argument("surface2: size mismatch");
    Surface2Field f(L1, L2, n1, n2);
    f.values_ = std::move(v);
    return f;
}

const std::vector<Complex>& Surface2Field::spectrum() const {
    if (!spec_valid_) {
        spec_.assign(n1_ * n2_, 0.0);
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t k1 = 0; k1 < n1_; ++k1) {
            for (std::size_t k2 = 0; k2 < n2_; ++k2) {
                Complex acc = 0.0;
                for (std::size_t j1 = 0; j1 < n1_; ++j1) {
                    for (std::size_t j2 = 0; j2 < n2_; ++j2) {
                        const double phase =
                            -two_pi * (static_cast<double>(k1 * j1) / n1_ +
                                       static_cast<double>(k2 * j2) / n2_);
                        acc += values_[j1 * n2_ + j2] * Complex(std::cos(phase), std::sin(phase));
                    }
                }
                spec_[k1 * n2_ + k2] = acc / static_cast<double>(n1_ * n2_);
            }
        }
        spec_valid_ = true;
    }
    return spec_;
}

double Surface2Field::mean() const {
    double m = 0.0;
    for (double v : values_) m += v;
    return m / static_cast<double>(values_.size());
}

Surface2Field& Surface2Field::remove_mean() {
    const double m = mean();
    for (double& v : values_) v -= m;
    spec_valid_ = false;
    return *this;
}

// ---------------------------------------------------------------------------
// random fields

SurfaceField random_surface(const Grid& g, std::uint64_t seed, double amplitude,
                            std::size_t max_mode, bool mean_zero) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> spec(fft::spectrum_size(g.nx), 0.0);
    const std::size_t kmax = std::min(max_mode, g.max_mode());
    for (std::size_t k = mean_zero ? 1 : 0; k <= kmax; ++k)
        spec[k] = amplitude * Complex(dist(rng), k == 0 ? 0.0 : dist(rng));
    return SurfaceField::from_spectrum(g, spec);
}

SlabField random_slab(const Grid& g, std::uint64_t seed, double amplitude, std::size_t max_mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t kmax = std::min(max_mode, g.max_mode());
    // smooth in y: a few low-order Chebyshev-like profiles with random weights
    std::vector<double> v(g.nx * g.nz, 0.0);
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double a = amplitude * dist(rng), b = amplitude * dist(rng);
        const double c0 = dist(rng), c1 = dist(rng), c2 = dist(rng);
        for (std::size_t iz = 0; iz < g.nz; ++iz) {
            const double t = g.y(iz) / g.depth;
            const double prof = c0 + c1 * t + c2 * (2.0 * t * t - 1.0);
            for (std::size_t ix = 0; ix < g.nx; ++ix) {
                const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * ix) / g.nx;
                v[iz * g.nx + ix] += prof * (a * std::cos(phase) + b * std::sin(phase));
            }
        }
    }
    return SlabField::from_values(g, std::move(v));
}

}  // namespace strata
