#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsap/fft.hpp"
#include "nsap/field.hpp"
#include "nsap/norms.hpp"
#include "nsap/rng.hpp"

using namespace nsap;

namespace {

std::vector<double> random_values(const Grid& g, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<double> v(g.point_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(i, -1.0, 1.0);
    return v;
}

}  // namespace

TEST_CASE("constant field transforms to a pure mean mode") {
    auto g = make_grid(3, 8, 2.0 * M_PI);
    ScalarField f = scalar_from_values(g, std::vector<double>(g->point_count(), 3.25));
    CHECK(std::abs(f.coeffs[0] - Complex(3.25, 0.0)) < 1e-13);
    double rest = 0.0;
    for (std::size_t i = 1; i < f.coeffs.size(); ++i) rest = std::max(rest, std::abs(f.coeffs[i]));
    CHECK(rest < 1e-13);
}

TEST_CASE("sin(2 pi x / L) produces exactly two conjugate modes") {
    auto g = make_grid(2, 16, 4.0);
    std::vector<double> v(g->point_count());
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            v[static_cast<std::size_t>(i) * 16 + j] = std::sin(2.0 * M_PI * g->coord(i) / 4.0);
    ScalarField f = scalar_from_values(g, std::move(v));
    // mode (1,0) should be -i/2, mode (-1,0) = +i/2
    const std::size_t plus = 1 * 16 + 0, minus = 15 * 16 + 0;
    CHECK(std::abs(f.coeffs[plus] - Complex(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(f.coeffs[minus] - Complex(0.0, 0.5)) < 1e-14);
    double rest = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (i != plus && i != minus) rest = std::max(rest, std::abs(f.coeffs[i]));
    CHECK(rest < 1e-14);
}

TEST_CASE("round trip reproduces samples to 1e-12 relative") {
    for (int dim : {2, 3}) {
        auto g = make_grid(dim, dim == 2 ? 32 : 16, 2.0 * M_PI);
        const auto v = random_values(*g, 42);
        ScalarField f = scalar_from_values(g, v);
        ScalarField back = scalar_from_coeffs(g, f.coeffs);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            worst = std::max(worst, std::abs(back.values[i] - v[i]));
            scale = std::max(scale, std::abs(v[i]));
        }
        CHECK(worst / scale < 1e-12);
    }
}

TEST_CASE("Parseval: grid quadrature equals L^N x coefficient energy") {
    auto g = make_grid(3, 16, 3.0);
    ScalarField f = scalar_from_values(g, random_values(*g, 7));
    CompensatedSum grid_side, spec_side;
    for (const double v : f.values) grid_side.add(v * v);
    for (const auto& c : f.coeffs) spec_side.add(std::norm(c));
    const double lhs = grid_side.value() * g->cell_volume();
    const double rhs = spec_side.value() * g->volume();
    CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
}

TEST_CASE("real input yields Hermitian-symmetric coefficients") {
    auto g = make_grid(2, 16, 1.0);
    ScalarField f = scalar_from_values(g, random_values(*g, 9));
    CHECK(hermitian_defect(f) < 1e-13);
}

TEST_CASE("non-finite samples are rejected") {
    auto g = make_grid(2, 8, 1.0);
    std::vector<double> v(g->point_count(), 0.0);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(scalar_from_values(g, std::move(v)), std::invalid_argument);
}
