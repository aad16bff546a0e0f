#pragma once

#include "nsap/field.hpp"

namespace nsap {

/// Riesz transform R_j with symbol -i k_j / |k|. The mean mode is mapped to
/// zero (the multiplier is singular at k = 0); under this sign convention
/// R_x cos(a x) = +sin(a x).
ScalarField riesz_apply(const ScalarField& f, int axis);

/// L(A) = sum_{j,k} R_j R_k A_jk, the scalar symbol -k_j k_l/|k|^2 applied to
/// a tensor; pressure_from_velocity(u) = L(u (x) u), mean-zero, satisfying
/// -lap P = div div (u (x) u). Sign convention: this is the pressure of
/// d_t u - lap u + (u.grad)u + grad P = 0, and the projection decomposes as
/// P[div(u (x) u)] = div(u (x) u) + grad L(u (x) u). For the Taylor-Green
/// field (sin x cos y, -cos x sin y) it evaluates to +(cos 2x + cos 2y)/4.
ScalarField tensor_riesz_trace(const TensorField& a);
ScalarField pressure_from_velocity(const VectorField& u);

/// Helmholtz-Weyl (Leray) projection with symbol delta_ij - k_i k_j/|k|^2.
/// The mean mode is zeroed: solenoidal fields are kept mean-free throughout
/// (Galilean frame fixed once and for all). Sets the solenoidal flag.
VectorField leray_project(const VectorField& f);

/// Pointwise tensor product u (x) v (symmetric storage when u == v is the
/// caller's choice via `symmetric`).
TensorField outer_product(const VectorField& u, const VectorField& v, bool symmetric);

namespace spectral {

/// In-place Leray projection on raw coefficient arrays (dim entries).
void leray_project_inplace(const Grid& g, std::vector<std::vector<Complex>>& comp);

}  // namespace spectral

}  // namespace nsap
