#pragma once

#include <span>

#include "nsap/field.hpp"

namespace nsap {

/// Spectral differential operators. All of them act by multiplication in
/// coefficient space; the Nyquist plane (|mode| = n/2) is zeroed in every
/// derivative because its odd-derivative sign is ambiguous on the grid.

ScalarField spectral_derivative(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);

/// gradient(f): vector of axis derivatives.
VectorField gradient(const ScalarField& f);
/// gradient(u): tensor with entry(i,j) = d u_j / d x_i.
TensorField gradient(const VectorField& u);

ScalarField divergence(const VectorField& u);

/// 2/3-rule truncation: zeroes every coefficient whose integer mode exceeds
/// the grid's dealias cutoff on any axis.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);
TensorField dealias(const TensorField& t);

/// Low-level kernels on raw coefficient arrays (shared by the solver paths;
/// sizes must match g.point_count()).
namespace spectral {

void derivative(const Grid& g, std::span<const Complex> in, int axis, std::span<Complex> out);
void scale_by_minus_k2(const Grid& g, std::span<const Complex> in, std::span<Complex> out);
void dealias_mask(const Grid& g, std::span<Complex> coeffs);
void zero_nyquist(const Grid& g, std::span<Complex> coeffs);

/// Applies f(flat_index, mode_vector) over all coefficients.
/// ModeFn signature: void(std::size_t idx, const int* m) with m[0..dim).
template <typename ModeFn>
void for_each_mode(const Grid& g, ModeFn&& fn) {
    const int n = g.n();
    const auto& modes = g.modes();
    int m[3] = {0, 0, 0};
    if (g.dim() == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            m[0] = modes[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j, ++idx) {
                m[1] = modes[static_cast<std::size_t>(j)];
                fn(idx, m);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            m[0] = modes[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                m[1] = modes[static_cast<std::size_t>(j)];
                for (int k = 0; k < n; ++k, ++idx) {
                    m[2] = modes[static_cast<std::size_t>(k)];
                    fn(idx, m);
                }
            }
        }
    }
}

}  // namespace spectral

}  // namespace nsap
