#include "nsap/operators.hpp"

#include <stdexcept>

namespace nsap {

namespace spectral {

void derivative(const Grid& g, std::span<const Complex> in, int axis, std::span<Complex> out) {
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("derivative: bad axis");
    const double ku = g.k_unit();
    const int nyq = g.nyquist_index();
    // The whole Nyquist plane is zeroed (not just the derivative axis) so
    // that derivative outputs live in the space where projection and Riesz
    // multipliers compose consistently.
    for_each_mode(g, [&](std::size_t idx, const int* m) {
        for (int d = 0; d < g.dim(); ++d) {
            if (m[d] == nyq) {
                out[idx] = Complex(0.0, 0.0);
                return;
            }
        }
        out[idx] = Complex(0.0, ku * m[axis]) * in[idx];
    });
}

void scale_by_minus_k2(const Grid& g, std::span<const Complex> in, std::span<Complex> out) {
    const double ku2 = g.k_unit() * g.k_unit();
    for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
        out[idx] = -ku2 * m2 * in[idx];
    });
}

void dealias_mask(const Grid& g, std::span<Complex> coeffs) {
    const int cut = g.dealias_cutoff();
    for_each_mode(g, [&](std::size_t idx, const int* m) {
        for (int d = 0; d < g.dim(); ++d) {
            if (m[d] > cut || m[d] < -cut) {
                coeffs[idx] = Complex(0.0, 0.0);
                return;
            }
        }
    });
}

void zero_nyquist(const Grid& g, std::span<Complex> coeffs) {
    const int nyq = g.nyquist_index();
    for_each_mode(g, [&](std::size_t idx, const int* m) {
        for (int d = 0; d < g.dim(); ++d) {
            if (m[d] == nyq) {
                coeffs[idx] = Complex(0.0, 0.0);
                return;
            }
        }
    });
}

}  // namespace spectral

ScalarField spectral_derivative(const ScalarField& f, int axis) {
    std::vector<Complex> out(f.coeffs.size());
    spectral::derivative(*f.grid, f.coeffs, axis, out);
    return scalar_from_coeffs(f.grid, std::move(out));
}

ScalarField laplacian(const ScalarField& f) {
    std::vector<Complex> out(f.coeffs.size());
    spectral::scale_by_minus_k2(*f.grid, f.coeffs, out);
    return scalar_from_coeffs(f.grid, std::move(out));
}

VectorField laplacian(const VectorField& u) {
    VectorField out;
    out.grid = u.grid;
    out.solenoidal = u.solenoidal;
    for (const auto& c : u.comp) out.comp.push_back(laplacian(c));
    return out;
}

VectorField gradient(const ScalarField& f) {
    VectorField out;
    out.grid = f.grid;
    for (int d = 0; d < f.grid->dim(); ++d) out.comp.push_back(spectral_derivative(f, d));
    return out;
}

TensorField gradient(const VectorField& u) {
    TensorField t = make_tensor(u.grid, false);
    for (int i = 0; i < u.grid->dim(); ++i)
        for (int j = 0; j < u.grid->dim(); ++j)
            t.at(i, j) = spectral_derivative(u.comp[static_cast<std::size_t>(j)], i);
    return t;
}

ScalarField divergence(const VectorField& u) {
    const Grid& g = *u.grid;
    std::vector<Complex> acc(g.point_count(), Complex(0.0, 0.0));
    std::vector<Complex> tmp(g.point_count());
    for (int d = 0; d < g.dim(); ++d) {
        spectral::derivative(g, u.comp[static_cast<std::size_t>(d)].coeffs, d, tmp);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += tmp[i];
    }
    return scalar_from_coeffs(u.grid, std::move(acc));
}

ScalarField dealias(const ScalarField& f) {
    std::vector<Complex> out = f.coeffs;
    spectral::dealias_mask(*f.grid, out);
    return scalar_from_coeffs(f.grid, std::move(out));
}

VectorField dealias(const VectorField& u) {
    VectorField out;
    out.grid = u.grid;
    out.solenoidal = u.solenoidal;  // masking modes preserves k.uhat = 0
    for (const auto& c : u.comp) out.comp.push_back(dealias(c));
    return out;
}

TensorField dealias(const TensorField& t) {
    TensorField out;
    out.grid = t.grid;
    out.symmetric = t.symmetric;
    for (const auto& e : t.entries) out.entries.push_back(dealias(e));
    return out;
}

}  // namespace nsap
