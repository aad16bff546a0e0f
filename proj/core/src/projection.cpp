#include "nsap/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "nsap/operators.hpp"

namespace nsap {

ScalarField riesz_apply(const ScalarField& f, int axis) {
    const Grid& g = *f.grid;
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("riesz_apply: bad axis");
    std::vector<Complex> out(f.coeffs.size());
    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
        if (m2 == 0.0) {
            out[idx] = Complex(0.0, 0.0);
        } else {
            const double r = m[axis] / std::sqrt(m2);
            out[idx] = Complex(0.0, -r) * f.coeffs[idx];
        }
    });
    return scalar_from_coeffs(f.grid, std::move(out));
}

ScalarField tensor_riesz_trace(const TensorField& a) {
    const Grid& g = *a.grid;
    std::vector<Complex> out(g.point_count(), Complex(0.0, 0.0));
    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
        if (m2 == 0.0) return;  // mean-zero output by convention
        Complex s(0.0, 0.0);
        for (int i = 0; i < g.dim(); ++i)
            for (int j = 0; j < g.dim(); ++j)
                s += static_cast<double>(m[i]) * m[j] * a.at(i, j).coeffs[idx];
        out[idx] = -s / m2;
    });
    return scalar_from_coeffs(a.grid, std::move(out));
}

TensorField outer_product(const VectorField& u, const VectorField& v, bool symmetric) {
    if (!u.grid->compatible(*v.grid)) throw std::invalid_argument("outer_product: grid mismatch");
    const std::size_t sz = u.grid->point_count();
    TensorField t = make_tensor(u.grid, symmetric);
    const int dim = u.grid->dim();
    for (int i = 0; i < dim; ++i) {
        for (int j = symmetric ? i : 0; j < dim; ++j) {
            std::vector<double> prod(sz);
            const auto& a = u.comp[static_cast<std::size_t>(i)].values;
            const auto& b = v.comp[static_cast<std::size_t>(j)].values;
            for (std::size_t x = 0; x < sz; ++x) prod[x] = a[x] * b[x];
            t.at(i, j) = scalar_from_values(u.grid, std::move(prod));
        }
    }
    return t;
}

ScalarField pressure_from_velocity(const VectorField& u) {
    return tensor_riesz_trace(outer_product(u, u, true));
}

namespace spectral {

void leray_project_inplace(const Grid& g, std::vector<std::vector<Complex>>& comp) {
    const int dim = g.dim();
    for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < dim; ++d) m2 += static_cast<double>(m[d]) * m[d];
        if (m2 == 0.0) {
            for (int d = 0; d < dim; ++d) comp[static_cast<std::size_t>(d)][idx] = Complex(0.0, 0.0);
            return;
        }
        Complex kdotu(0.0, 0.0);
        for (int d = 0; d < dim; ++d)
            kdotu += static_cast<double>(m[d]) * comp[static_cast<std::size_t>(d)][idx];
        kdotu /= m2;
        for (int d = 0; d < dim; ++d)
            comp[static_cast<std::size_t>(d)][idx] -= static_cast<double>(m[d]) * kdotu;
    });
}

}  // namespace spectral

VectorField leray_project(const VectorField& f) {
    const Grid& g = *f.grid;
    std::vector<std::vector<Complex>> comp;
    comp.reserve(f.comp.size());
    for (const auto& c : f.comp) comp.push_back(c.coeffs);
    spectral::leray_project_inplace(g, comp);
    return vector_from_coeffs(f.grid, std::move(comp), /*solenoidal=*/true);
}

}  // namespace nsap
