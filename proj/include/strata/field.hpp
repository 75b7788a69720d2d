#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "strata/grid.hpp"

namespace strata {

using Complex = std::complex<double>;

// Real scalar field on the surface grid (nx samples over one period).
// Values are the source of truth; the horizontal spectrum is cached lazily.
// Construction projects out the Nyquist mode so the spectrum determines the
// values exactly and vice versa.
class SurfaceField {
  public:
    SurfaceField() = default;
    explicit SurfaceField(const Grid& g);

    static SurfaceField from_values(const Grid& g, std::vector<double> v);
    static SurfaceField from_spectrum(const Grid& g, const std::vector<Complex>& half_spectrum);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    // half spectrum c_k, k = 0..nx/2 (Nyquist entry always zero)
    const std::vector<Complex>& spectrum() const;

    double value(std::size_t ix) const { return values_[ix]; }
    std::size_t size() const { return values_.size(); }

    double mean() const;
    SurfaceField& remove_mean();

    // spectral derivative d/dx (multiplier 2 pi i k / L)
    SurfaceField derivative() const;
    // resample onto another grid with the same period (pad or truncate modes)
    SurfaceField resample(const Grid& g) const;

    SurfaceField& operator+=(const SurfaceField& o);
    SurfaceField& operator-=(const SurfaceField& o);
    SurfaceField& operator*=(double s);
    void add_scaled(double s, const SurfaceField& o);
    void scale(double s) { *this *= s; }
    static SurfaceField zero_like(const SurfaceField& o) { return SurfaceField(o.grid()); }

  private:
    Grid grid_;
    std::vector<double> values_;
    mutable std::vector<Complex> spec_;
    mutable bool spec_valid_ = false;
};

// Real scalar field on the slab grid, stored z-major: value(iz, ix) with
// iz = 0 the bottom and iz = nz-1 the free surface.
class SlabField {
  public:
    SlabField() = default;
    explicit SlabField(const Grid& g);

    static SlabField from_values(const Grid& g, std::vector<double> v);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t iz, std::size_t ix) const { return values_[iz * grid_.nx + ix]; }
    std::size_t size() const { return values_.size(); }

    // horizontal half spectrum per level: entry(iz, k) = coeffs_[iz*(nx/2+1)+k]
    const std::vector<Complex>& spectrum() const;
    Complex coeff(std::size_t iz, std::size_t k) const;

    SurfaceField top_trace() const;     // values at y = depth
    SurfaceField bottom_trace() const;  // values at y = 0

    SlabField dx() const;  // horizontal spectral derivative
    SlabField dz() const;  // vertical Chebyshev derivative
    SurfaceField integrate_vertical() const;  // int_0^b f(., y) dy

    SlabField resample(const Grid& g) const;

    SlabField& operator+=(const SlabField& o);
    SlabField& operator-=(const SlabField& o);
    SlabField& operator*=(double s);
    void add_scaled(double s, const SlabField& o);
    void scale(double s) { *this *= s; }
    static SlabField zero_like(const SlabField& o) { return SlabField(o.grid()); }

  private:
    Grid grid_;
    std::vector<double> values_;
    mutable std::vector<Complex> spec_;
    mutable bool spec_valid_ = false;
};

SurfaceField operator+(SurfaceField a, const SurfaceField& b);
SurfaceField operator-(SurfaceField a, const SurfaceField& b);
SurfaceField operator*(double s, SurfaceField a);
SlabField operator+(SlabField a, const SlabField& b);
SlabField operator-(SlabField a, const SlabField& b);
SlabField operator*(double s, SlabField a);

// pointwise product (no dealiasing; callers needing dealiased products work
// on a refined grid)
SurfaceField pointwise(const SurfaceField& a, const SurfaceField& b);
SlabField pointwise(const SlabField& a, const SlabField& b);

// Doubly periodic real field on an n1 x n2 grid with periods L1, L2; only
// used to exercise the two-dimensional surface norms (d = 2 test path).
// Spectra are computed by direct DFT; the grids involved are tiny.
class Surface2Field {
  public:
    Surface2Field(double L1, double L2, std::size_t n1, std::size_t n2);
    static Surface2Field from_values(double L1, double L2, std::size_t n1, std::size_t n2,
                                     std::vector<double> v);

    double L1() const { return L1_; }
    double L2() const { return L2_; }
    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    const std::vector<double>& values() const { return values_; }

    // full complex spectrum, entry(k1, k2) with k_i = 0..n_i-1 (wrapping)
    const std::vector<Complex>& spectrum() const;
    double mean() const;
    Surface2Field& remove_mean();

  private:
    double L1_, L2_;
    std::size_t n1_, n2_;
    std::vector<double> values_;
    mutable std::vector<Complex> spec_;
    mutable bool spec_valid_ = false;
};

// deterministic band-limited random fields for tests and probes
SurfaceField random_surface(const Grid& g, std::uint64_t seed, double amplitude,
                            std::size_t max_mode, bool mean_zero = true);
SlabField random_slab(const Grid& g, std::uint64_t seed, double amplitude, std::size_t max_mode);

}  // namespace strata
