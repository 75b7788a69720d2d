#pragma once

#include <cstddef>
#include <functional>

namespace strata::kernels {

enum class Mode { serial, openmp };

// Process-wide execution mode.  The OpenMP variants of every kernel compute
// the same result as the serial reference (elementwise writes, no floating
// point reductions), so switching modes never changes output bits.
Mode mode();
void set_mode(Mode m);
int thread_count();

// out[i] = a[i] * b[i]
void multiply(const double* a, const double* b, double* out, std::size_t n);
// out[i] += s * a[i]
void axpy(double s, const double* a, double* out, std::size_t n);
// out[i] = f(i) for an arbitrary per-index kernel
void map_index(std::size_t n, const std::function<void(std::size_t)>& f);

// y = D x applied to every horizontal site of a slab stored z-major
// (value(iz, ix) = data[iz * nx + ix]); D is row-major m x m.
void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out);

namespace serial {
void multiply(const double* a, const double* b, double* out, std::size_t n);
void axpy(double s, const double* a, double* out, std::size_t n);
void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out);
}  // namespace serial

namespace openmp {
void multiply(const double* a, const double* b, double* out, std::size_t n);
void axpy(double s, const double* a, double* out, std::size_t n);
void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out);
}  // namespace openmp

}  // namespace strata::kernels
