#pragma once

#include <complex>
#include <span>

#include "nsap/grid.hpp"

namespace nsap {

using Complex = std::complex<double>;

/// Spectral coefficient convention
/// -------------------------------
/// Coefficients are those of the trigonometric interpolant,
///
///     u(x) = sum_k uhat(k) exp(i k . x),
///
/// i.e. forward = DFT / n^dim and inverse is the plain unnormalized inverse
/// DFT. Under this convention a constant field c has uhat(0) = c, a single
/// complex exponential has coefficient 1 at its mode, and Parseval reads
///
///     sum_x |u(x)|^2 (L/n)^dim  =  L^dim sum_k |uhat(k)|^2.
///
/// Transforms are backed by cached FFTW plans (one set per grid signature);
/// execution is thread-safe on distinct buffers.

/// Real samples -> spectral coefficients (full complex array, Hermitian).
void transform_forward(const Grid& g, std::span<const double> values,
                       std::span<Complex> coeffs);

/// Spectral coefficients -> real samples (imaginary parts are discarded;
/// they vanish for Hermitian-symmetric input).
void transform_inverse(const Grid& g, std::span<const Complex> coeffs,
                       std::span<double> values);

/// Complex-to-complex variants used by diagnostics and tests.
void transform_forward_c2c(const Grid& g, std::span<const Complex> in,
                           std::span<Complex> out);
void transform_inverse_c2c(const Grid& g, std::span<const Complex> in,
                           std::span<Complex> out);

/// Caps FFTW's internal parallelism; reads NSAP_THREADS once on first use.
int planned_thread_count();

}  // namespace nsap
