#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "nsap/operators.hpp"
#include "nsap/rng.hpp"

using namespace nsap;

namespace {

ScalarField sample_2d(GridPtr g, const std::function<double(double, double)>& f) {
    std::vector<double> v(g->point_count());
    const int n = g->n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            v[static_cast<std::size_t>(i) * n + j] = f(g->coord(i), g->coord(j));
    return scalar_from_values(g, std::move(v));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

ScalarField random_band_limited(GridPtr g, int kmax, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<Complex> c(g->point_count(), Complex(0, 0));
    const int n = g->n();
    auto wrap = [n](int i) { return i == 0 ? 0 : n - i; };
    spectral::for_each_mode(*g, [&](std::size_t idx, const int* m) {
        for (int d = 0; d < g->dim(); ++d)
            if (std::abs(m[d]) > kmax) return;
        // canonical half-space fill with Hermitian mirror
        std::size_t rem = idx;
        int iax[3] = {0, 0, 0};
        for (int d = g->dim() - 1; d >= 0; --d) {
            iax[d] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        std::size_t conj_idx = 0;
        for (int d = 0; d < g->dim(); ++d)
            conj_idx = conj_idx * n + static_cast<std::size_t>(wrap(iax[d]));
        if (conj_idx < idx) return;
        auto [g1, g2] = rng.gaussian_pair(2 * idx);
        if (conj_idx == idx) {
            c[idx] = Complex(g1, 0.0);
        } else {
            c[idx] = Complex(g1, g2);
            c[conj_idx] = std::conj(c[idx]);
        }
    });
    return scalar_from_coeffs(g, std::move(c));
}

}  // namespace

TEST_CASE("d/dx sin(2 pi x/L) = (2 pi/L) cos(2 pi x/L)") {
    auto g = make_grid(2, 32, 5.0);
    const double k = 2.0 * M_PI / 5.0;
    ScalarField f = sample_2d(g, [&](double x, double) { return std::sin(k * x); });
    ScalarField expect = sample_2d(g, [&](double x, double) { return k * std::cos(k * x); });
    ScalarField got = spectral_derivative(f, 0);
    CHECK(max_abs_diff(got.values, expect.values) / k < 1e-12);
}

TEST_CASE("divergence of u = (sin y, 0, 0) vanishes") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    const int n = g->n();
    std::vector<double> ux(g->point_count());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int kk = 0; kk < n; ++kk, ++idx) ux[idx] = std::sin(g->coord(j));
    VectorField u = vector_from_values(
        g, {std::move(ux), std::vector<double>(g->point_count(), 0.0),
            std::vector<double>(g->point_count(), 0.0)});
    ScalarField div = divergence(u);
    double worst = 0.0;
    for (const double v : div.values) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-13);
}

TEST_CASE("laplacian of a single mode is -|k|^2 times it") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    std::vector<Complex> c(g->point_count(), Complex(0, 0));
    // mode (2, -1, 3): flat index with wrap
    const int n = g->n();
    const std::size_t idx = ((2) * static_cast<std::size_t>(n) + (n - 1)) * n + 3;
    c[idx] = Complex(0.7, -0.3);
    ScalarField f = scalar_from_coeffs(g, std::move(c));
    ScalarField lap = laplacian(f);
    const double k2 = 4.0 + 1.0 + 9.0;
    CHECK(std::abs(lap.coeffs[idx] - (-k2) * f.coeffs[idx]) < 1e-12);
}

TEST_CASE("mixed partial derivatives commute to machine precision") {
    auto g = make_grid(2, 32, 2.0 * M_PI);
    ScalarField f = random_band_limited(g, 10, 3);
    ScalarField dxy = spectral_derivative(spectral_derivative(f, 0), 1);
    ScalarField dyx = spectral_derivative(spectral_derivative(f, 1), 0);
    double scale = 0.0;
    for (const double v : dxy.values) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(dxy.values, dyx.values) <= 1e-13 * std::max(scale, 1.0));
}

TEST_CASE("derivatives zero the Nyquist plane") {
    auto g = make_grid(2, 8, 2.0 * M_PI);
    std::vector<Complex> c(g->point_count(), Complex(0, 0));
    const std::size_t nyq_idx = 4 * static_cast<std::size_t>(8) + 0;  // mode (4, 0)
    c[nyq_idx] = Complex(1.0, 0.0);
    ScalarField f = scalar_from_coeffs(g, std::move(c));
    ScalarField d = spectral_derivative(f, 0);
    for (const auto& z : d.coeffs) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("dealias leaves band-limited fields unchanged") {
    auto g = make_grid(2, 32, 2.0 * M_PI);
    ScalarField f = random_band_limited(g, g->dealias_cutoff(), 5);
    ScalarField masked = dealias(f);
    CHECK(max_abs_diff(masked.values, f.values) < 1e-14);
}

TEST_CASE("dealias kills a pure Nyquist mode") {
    auto g = make_grid(2, 16, 2.0 * M_PI);
    std::vector<Complex> c(g->point_count(), Complex(0, 0));
    c[8 * 16 + 0] = Complex(1.0, 0.0);  // mode (8, 0): Nyquist
    ScalarField f = scalar_from_coeffs(g, std::move(c));
    ScalarField masked = dealias(f);
    for (const auto& z : masked.coeffs) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("dealiased product matches the double-resolution oracle") {
    // sin(9x) sin(10x) has modes at +-1 (retained) and +-19 (aliases to
    // -+13 on the coarse grid). Compute the product on a 2n grid where it is
    // alias-free, truncate to the coarse band, compare.
    const int n = 32;
    auto g = make_grid(2, n, 2.0 * M_PI);
    auto g2 = make_grid(2, 2 * n, 2.0 * M_PI);

    auto sample_product = [](GridPtr gg) {
        std::vector<double> v(gg->point_count());
        const int nn = gg->n();
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j)
                v[static_cast<std::size_t>(i) * nn + j] =
                    std::sin(9 * gg->coord(i)) * std::sin(10 * gg->coord(i));
        return v;
    };
    // coarse route: pointwise product on the n grid (aliased), then 2/3 mask
    ScalarField coarse = dealias(scalar_from_values(g, sample_product(g)));

    // oracle: product on the 2n grid (exact up to mode 19 < 2n/3 cutoff 21),
    // then restrict to the coarse grid's retained band
    ScalarField fine = scalar_from_values(g2, sample_product(g2));

    const int cut = g->dealias_cutoff();
    double worst = 0.0;
    spectral::for_each_mode(*g, [&](std::size_t idx, const int* m) {
        if (std::abs(m[0]) > cut || std::abs(m[1]) > cut) return;
        // same mode on the fine grid
        const int n2 = g2->n();
        const int i2 = m[0] >= 0 ? m[0] : n2 + m[0];
        const int j2 = m[1] >= 0 ? m[1] : n2 + m[1];
        const std::size_t idx2 = static_cast<std::size_t>(i2) * n2 + j2;
        worst = std::max(worst, std::abs(coarse.coeffs[idx] - fine.coeffs[idx2]));
    });
    CHECK(worst < 1e-13);
}
