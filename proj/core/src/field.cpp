#include "nsap/field.hpp"

#include <cmath>
#include <stdexcept>

#include "nsap/fft.hpp"
#include "nsap/operators.hpp"

namespace nsap {

ScalarField scalar_from_values(GridPtr grid, std::vector<double> values) {
    if (!grid) throw std::invalid_argument("scalar_from_values: null grid");
    if (values.size() != grid->point_count())
        throw std::invalid_argument("scalar_from_values: size mismatch");
    ScalarField f;
    f.grid = std::move(grid);
    f.values = std::move(values);
    f.coeffs.resize(f.values.size());
    transform_forward(*f.grid, f.values, f.coeffs);
    return f;
}

ScalarField scalar_from_coeffs(GridPtr grid, std::vector<Complex> coeffs) {
    if (!grid) throw std::invalid_argument("scalar_from_coeffs: null grid");
    if (coeffs.size() != grid->point_count())
        throw std::invalid_argument("scalar_from_coeffs: size mismatch");
    ScalarField f;
    f.grid = std::move(grid);
    f.coeffs = std::move(coeffs);
    f.values.resize(f.coeffs.size());
    transform_inverse(*f.grid, f.coeffs, f.values);
    return f;
}

ScalarField zero_scalar(GridPtr grid) {
    if (!grid) throw std::invalid_argument("zero_scalar: null grid");
    ScalarField f;
    f.grid = std::move(grid);
    f.values.assign(f.grid->point_count(), 0.0);
    f.coeffs.assign(f.grid->point_count(), Complex(0.0, 0.0));
    return f;
}

VectorField vector_from_values(GridPtr grid, std::vector<std::vector<double>> values) {
    if (!grid) throw std::invalid_argument("vector_from_values: null grid");
    if (static_cast<int>(values.size()) != grid->dim())
        throw std::invalid_argument("vector_from_values: component count mismatch");
    VectorField u;
    u.grid = grid;
    u.comp.reserve(values.size());
    for (auto& v : values) u.comp.push_back(scalar_from_values(grid, std::move(v)));
    return u;
}

VectorField vector_from_coeffs(GridPtr grid, std::vector<std::vector<Complex>> coeffs,
                               bool solenoidal) {
    if (!grid) throw std::invalid_argument("vector_from_coeffs: null grid");
    if (static_cast<int>(coeffs.size()) != grid->dim())
        throw std::invalid_argument("vector_from_coeffs: component count mismatch");
    VectorField u;
    u.grid = grid;
    u.comp.reserve(coeffs.size());
    for (auto& c : coeffs) u.comp.push_back(scalar_from_coeffs(grid, std::move(c)));
    u.solenoidal = solenoidal;
    return u;
}

VectorField zero_vector(GridPtr grid) {
    if (!grid) throw std::invalid_argument("zero_vector: null grid");
    VectorField u;
    u.grid = grid;
    for (int d = 0; d < grid->dim(); ++d) u.comp.push_back(zero_scalar(grid));
    u.solenoidal = true;
    return u;
}

namespace {
std::size_t sym_index(int dim, int i, int j) {
    if (i > j) std::swap(i, j);
    // upper-triangle row-major: (i,j), j >= i
    std::size_t idx = 0;
    for (int r = 0; r < i; ++r) idx += static_cast<std::size_t>(dim - r);
    return idx + static_cast<std::size_t>(j - i);
}
}  // namespace

const ScalarField& TensorField::at(int i, int j) const {
    const int d = grid->dim();
    if (symmetric) return entries[sym_index(d, i, j)];
    return entries[static_cast<std::size_t>(i) * d + j];
}

ScalarField& TensorField::at(int i, int j) {
    const int d = grid->dim();
    if (symmetric) return entries[sym_index(d, i, j)];
    return entries[static_cast<std::size_t>(i) * d + j];
}

TensorField make_tensor(GridPtr grid, bool symmetric) {
    if (!grid) throw std::invalid_argument("make_tensor: null grid");
    TensorField t;
    t.grid = grid;
    t.symmetric = symmetric;
    const int d = grid->dim();
    const std::size_t count =
        symmetric ? static_cast<std::size_t>(d) * (d + 1) / 2 : static_cast<std::size_t>(d) * d;
    for (std::size_t e = 0; e < count; ++e) t.entries.push_back(zero_scalar(grid));
    return t;
}

double divergence_residual(const VectorField& u) {
    const Grid& g = *u.grid;
    const double ku = g.k_unit();
    double max_div = 0.0;
    double max_coeff = 0.0;
    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        Complex div(0.0, 0.0);
        for (int d = 0; d < g.dim(); ++d) {
            const Complex c = u.comp[static_cast<std::size_t>(d)].coeffs[idx];
            div += Complex(0.0, ku * m[d]) * c;
            max_coeff = std::max(max_coeff, std::abs(c));
        }
        max_div = std::max(max_div, std::abs(div));
    });
    if (max_coeff == 0.0) return 0.0;
    return max_div / max_coeff;
}

double hermitian_defect(const ScalarField& f) {
    const Grid& g = *f.grid;
    const int n = g.n();
    auto wrap = [n](int i) { return i == 0 ? 0 : n - i; };
    double worst = 0.0;
    const auto& c = f.coeffs;
    if (g.dim() == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::size_t a = static_cast<std::size_t>(i) * n + j;
                const std::size_t b = static_cast<std::size_t>(wrap(i)) * n + wrap(j);
                worst = std::max(worst, std::abs(c[a] - std::conj(c[b])));
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const std::size_t a = (static_cast<std::size_t>(i) * n + j) * n + k;
                    const std::size_t b =
                        (static_cast<std::size_t>(wrap(i)) * n + wrap(j)) * n + wrap(k);
                    worst = std::max(worst, std::abs(c[a] - std::conj(c[b])));
                }
    }
    return worst;
}

bool all_finite(const ScalarField& f) {
    for (const double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const VectorField& u) {
    for (const auto& c : u.comp)
        if (!all_finite(c)) return false;
    return true;
}

double speed_at(const VectorField& u, std::size_t idx) {
    double s2 = 0.0;
    for (const auto& c : u.comp) s2 += c.values[idx] * c.values[idx];
    return std::sqrt(s2);
}

double max_speed(const VectorField& u) {
    double best = 0.0;
    const std::size_t sz = u.grid->point_count();
    for (std::size_t i = 0; i < sz; ++i) {
        double s2 = 0.0;
        for (const auto& c : u.comp) s2 += c.values[i] * c.values[i];
        best = std::max(best, s2);
    }
    return std::sqrt(best);
}

}  // namespace nsap
