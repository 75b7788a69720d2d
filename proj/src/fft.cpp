#include "strata/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace strata::fft {

namespace {

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

std::mutex plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
    static std::map<std::size_t, PlanPair> cache;
    return cache;
}

// FFTW_UNALIGNED lets us execute on plain std::vector storage.
const PlanPair& plans_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                 reinterpret_cast<fftw_complex*>(cplx.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                 reinterpret_cast<fftw_complex*>(cplx.data()),
                                 real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.r2c || !p.c2r) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, p).first->second;
}

}  // namespace

std::size_t spectrum_size(std::size_t n) { return n / 2 + 1; }

void forward(const double* values, std::size_t n, std::complex<double>* coeffs) {
    const PlanPair& p = plans_for(n);
    std::vector<double> in(values, values + n);
    fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(coeffs));
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2 + 1; ++k) coeffs[k] *= scale;
    if (n % 2 == 0) coeffs[n / 2] = 0.0;  // drop Nyquist
}

void inverse(const std::complex<double>* coeffs, std::size_t n, double* values) {
    const PlanPair& p = plans_for(n);
    std::vector<std::complex<double>> in(coeffs, coeffs + n / 2 + 1);
    if (n % 2 == 0) in[n / 2] = 0.0;
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), values);
}

}  // namespace strata::fft
