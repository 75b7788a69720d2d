#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace strata {

// Thin wrapper over FFTW real<->complex transforms with an internal plan
// cache keyed by transform size.  Plans are created lazily under a mutex;
// execution uses FFTW's new-array interface and is safe to call from
// multiple threads on distinct buffers.
//
// Conventions: forward(values) returns coefficients c_k, k = 0..n/2, with
//   f(x_j) = sum_{k=-n/2}^{n/2-1} c_k exp(2 pi i j k / n),  c_{-k} = conj(c_k),
// i.e. the forward transform divides by n.  The Nyquist coefficient (k = n/2,
// n even) is forced to zero on analysis so that every field handled by the
// library has an unambiguous conjugate-symmetric spectrum.
namespace fft {

// coefficients of real data (size n) -> complex half-spectrum (size n/2+1)
void forward(const double* values, std::size_t n, std::complex<double>* coeffs);

// complex half-spectrum -> real data; inverse of forward() up to Nyquist loss
void inverse(const std::complex<double>* coeffs, std::size_t n, double* values);

std::size_t spectrum_size(std::size_t n);

}  // namespace fft

}  // namespace strata
