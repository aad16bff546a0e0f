#pragma once

#include <complex>
#include <vector>

#include "nsap/grid.hpp"

namespace nsap {

using Complex = std::complex<double>;

/// Scalar sample array paired with its spectral representation. Both arrays
/// are kept populated and consistent; constructors perform the missing
/// transform. Fields are plain values: copy freely, never mutate in place.
struct ScalarField {
    GridPtr grid;
    std::vector<double> values;   // n^dim real samples, row-major, last axis fastest
    std::vector<Complex> coeffs;  // n^dim complex coefficients, same layout
};

ScalarField scalar_from_values(GridPtr grid, std::vector<double> values);
ScalarField scalar_from_coeffs(GridPtr grid, std::vector<Complex> coeffs);
ScalarField zero_scalar(GridPtr grid);

/// Velocity-like field with one ScalarField per axis. `solenoidal` is set by
/// the operations that guarantee it (projection, solver steps) and checked
/// by the ones that require it.
struct VectorField {
    GridPtr grid;
    std::vector<ScalarField> comp;  // size dim
    bool solenoidal = false;
};

VectorField vector_from_values(GridPtr grid, std::vector<std::vector<double>> values);
VectorField vector_from_coeffs(GridPtr grid, std::vector<std::vector<Complex>> coeffs,
                               bool solenoidal = false);
VectorField zero_vector(GridPtr grid);

/// dim x dim matrix of scalar fields; symmetric storage keeps the upper
/// triangle only and mirrors access.
struct TensorField {
    GridPtr grid;
    bool symmetric = false;
    std::vector<ScalarField> entries;  // dim*dim, or dim*(dim+1)/2 when symmetric

    const ScalarField& at(int i, int j) const;
    ScalarField& at(int i, int j);
};

TensorField make_tensor(GridPtr grid, bool symmetric);

/// max_k |k . uhat(k)| / max_k |uhat(k)|; zero field gives 0.
double divergence_residual(const VectorField& u);

/// Largest |coeffs(-k) - conj(coeffs(k))| over all mode pairs.
double hermitian_defect(const ScalarField& f);

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& u);

/// Pointwise Euclidean magnitude |u(x)| at flat index idx.
double speed_at(const VectorField& u, std::size_t idx);
double max_speed(const VectorField& u);

}  // namespace nsap
