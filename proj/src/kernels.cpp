#include "strata/kernels.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace strata::kernels {

namespace {
std::atomic<Mode> g_mode{Mode::openmp};
}

Mode mode() { return g_mode.load(std::memory_order_relaxed); }
void set_mode(Mode m) { g_mode.store(m, std::memory_order_relaxed); }

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

void multiply(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double s, const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += s * a[i];
}

void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = diff + i * m;
        double* dst = out + i * nx;
        for (std::size_t ix = 0; ix < nx; ++ix) dst[ix] = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = row[j];
            const double* src = in + j * nx;
            for (std::size_t ix = 0; ix < nx; ++ix) dst[ix] += d * src[ix];
        }
    }
}

}  // namespace serial

namespace openmp {

void multiply(const double* a, const double* b, double* out, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[i] = a[i] * b[i];
}

void axpy(double s, const double* a, double* out, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) out[i] += s * a[i];
}

void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(m); ++i) {
        const double* row = diff + i * m;
        double* dst = out + i * nx;
        for (std::size_t ix = 0; ix < nx; ++ix) dst[ix] = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = row[j];
            const double* src = in + j * nx;
            for (std::size_t ix = 0; ix < nx; ++ix) dst[ix] += d * src[ix];
        }
    }
}

}  // namespace openmp

void multiply(const double* a, const double* b, double* out, std::size_t n) {
    if (mode() == Mode::openmp)
        openmp::multiply(a, b, out, n);
    else
        serial::multiply(a, b, out, n);
}

void axpy(double s, const double* a, double* out, std::size_t n) {
    if (mode() == Mode::openmp)
        openmp::axpy(s, a, out, n);
    else
        serial::axpy(s, a, out, n);
}

void apply_columns(const double* diff, std::size_t m, std::size_t nx,
                   const double* in, double* out) {
    if (mode() == Mode::openmp)
        openmp::apply_columns(diff, m, nx, in, out);
    else
        serial::apply_columns(diff, m, nx, in, out);
}

void map_index(std::size_t n, const std::function<void(std::size_t)>& f) {
    if (mode() == Mode::openmp) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

}  // namespace strata::kernels
