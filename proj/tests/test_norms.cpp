#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsap/initial_conditions.hpp"
#include "nsap/norms.hpp"
#include "nsap/operators.hpp"

using namespace nsap;

namespace {

VectorField taylor_green_2d(GridPtr g, double amp = 1.0) {
    IcParams ic;
    ic.kind = IcKind::taylor_green;
    ic.amplitude = amp;
    return make_initial(g, ic);
}

VectorField random_solenoidal(GridPtr g, std::uint64_t seed, double amp = 1.0) {
    IcParams ic;
    ic.kind = IcKind::random_solenoidal;
    ic.amplitude = amp;
    ic.peak_k = 3.0;
    ic.seed = seed;
    return make_initial(g, ic);
}

}  // namespace

TEST_CASE("lp_norm of the zero field is 0 for all q") {
    auto g = make_grid(3, 8, 2.0);
    VectorField u = zero_vector(g);
    for (double q : {1.0, 2.0, 3.0, 9.0}) CHECK(lp_norm(u, q) == 0.0);
    CHECK(lp_norm(u, kInfinityNorm) == 0.0);
}

TEST_CASE("constant-magnitude field has ||u||_q = c V^{1/q}") {
    auto g = make_grid(3, 8, 1.7);
    const double c = 0.8;
    // (c/sqrt3, c/sqrt3, c/sqrt3) has a constant magnitude c
    std::vector<std::vector<double>> vals(3, std::vector<double>(g->point_count(), c / std::sqrt(3.0)));
    VectorField u = vector_from_values(g, std::move(vals));
    const double V = g->volume();
    for (double q : {1.0, 2.0, 3.0, 4.0, 7.5}) {
        CHECK(lp_norm(u, q) == doctest::Approx(c * std::pow(V, 1.0 / q)).epsilon(1e-13));
    }
    CHECK(lp_norm(u, kInfinityNorm) == doctest::Approx(c).epsilon(1e-13));
}

TEST_CASE("q = 2 quadrature matches the Parseval route to 1e-10") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 3);
    const double a = lp_norm(u, 2.0);
    const double b = l2_norm_spectral(u);
    CHECK(std::abs(a - b) / a < 1e-10);
}

TEST_CASE("q < 1 is rejected") {
    auto g = make_grid(2, 8, 1.0);
    CHECK_THROWS_AS(lp_norm(zero_vector(g), 0.5), std::invalid_argument);
}

TEST_CASE("compensated quadrature of |u|^27 matches a long-double oracle") {
    auto g = make_grid(2, 32, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 5, 2.0);
    const double got = lp_norm(u, 27.0);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < g->point_count(); ++i) {
        long double s2 = 0.0L;
        for (const auto& c : u.comp)
            s2 += static_cast<long double>(c.values[i]) * c.values[i];
        acc += std::pow(s2, 13.5L);
    }
    const long double expect =
        std::pow(acc * static_cast<long double>(g->cell_volume()), 1.0L / 27.0L);
    CHECK(std::abs(got - static_cast<double>(expect)) / static_cast<double>(expect) < 1e-13);
}

TEST_CASE("kappa of a constant-magnitude field equals ||u||_3") {
    // closed form: kappa_p = ||u||_p^theta ||u||_2^{1-theta} with
    // ||u||_q = c V^{1/q}; the exponents collapse to c V^{1/3} = ||u||_3.
    auto g = make_grid(3, 8, 2.5);
    const double c = 1.3;
    std::vector<std::vector<double>> vals(3, std::vector<double>(g->point_count(), c / std::sqrt(3.0)));
    VectorField u = vector_from_values(g, std::move(vals));
    for (double p : {4.0, 6.0, 9.0}) {
        const double k = kappa(u, p, 3).value;
        CHECK(k == doctest::Approx(lp_norm(u, 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("kappa is homogeneous of degree one") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 7);
    const double k1 = kappa(u, 4.0, 3).value;
    std::vector<std::vector<double>> scaled;
    for (const auto& c : u.comp) {
        auto v = c.values;
        for (auto& x : v) x *= 3.7;
        scaled.push_back(std::move(v));
    }
    const double k2 = kappa(vector_from_values(g, std::move(scaled)), 4.0, 3).value;
    CHECK(std::abs(k2 - 3.7 * k1) / (3.7 * k1) < 1e-12);
}

TEST_CASE("kappa dominates ||u||_3 (Hoelder)") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        VectorField u = random_solenoidal(g, seed);
        for (double p : {4.0, 6.0, 9.0})
            CHECK(kappa(u, p, 3).value >= lp_norm(u, 3.0) * (1.0 - 1e-8));
    }
}

TEST_CASE("kappa rejects p <= N") {
    auto g = make_grid(3, 8, 1.0);
    CHECK_THROWS_AS(kappa(zero_vector(g), 3.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(kappa(zero_vector(g), 2.0, 3), std::invalid_argument);
}

TEST_CASE("kappa cubed identity at N=3") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 13);
    for (double p : {4.0, 6.0, 9.0}) {
        const double lhs = kappa_cubed_identity(lp_norm(u, p), lp_norm(u, 2.0), p);
        const double rhs = std::pow(kappa(u, p, 3).value, 3.0);
        CHECK(std::abs(lhs - rhs) / rhs < 1e-10);
    }
}

TEST_CASE("D_2 equals ||grad u||_2^2") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 17);
    const double direct = dissipation(u, gradient(u), 2.0);
    const double spectral = grad_l2_squared(u);
    CHECK(std::abs(direct - spectral) / spectral < 1e-10);
    CHECK(dissipation(zero_vector(g), 2.0) == 0.0);
}

TEST_CASE("dissipation rejects p < 2") {
    auto g = make_grid(2, 8, 1.0);
    CHECK_THROWS_AS(dissipation(zero_vector(g), 1.5), std::invalid_argument);
}

TEST_CASE("D_4 of 2D Taylor-Green matches a 256^2 reference quadrature") {
    auto coarse = make_grid(2, 64, 2.0 * M_PI);
    auto fine = make_grid(2, 256, 2.0 * M_PI);
    const double a = dissipation(taylor_green_2d(coarse), 4.0);
    const double b = dissipation(taylor_green_2d(fine), 4.0);
    CHECK(std::abs(a - b) / b < 1e-8);
}

TEST_CASE("exponent table values and rational identity") {
    const ExponentTable t43 = exponent_table(4.0, 3);
    CHECK(t43.alpha == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(t43.alpha_num == 12);
    CHECK(t43.alpha_den == 1);
    // alpha(p,3) (p-3) = p(p-1) exactly in integer arithmetic
    for (long long p : {4LL, 5LL, 6LL, 9LL, 12LL}) {
        const ExponentTable t = exponent_table(static_cast<double>(p), 3);
        CHECK(t.alpha_num * (p - 3) == p * (p - 1) * t.alpha_den);
    }
    const ExponentTable t42 = exponent_table(4.0, 2);
    CHECK(t42.alpha == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(exponent_table(6.0, 3).sobolev_r == doctest::Approx(6.0));
    CHECK(exponent_table(4.0, 2).sobolev_r == kInfinityNorm);
    CHECK_THROWS_AS(exponent_table(3.0, 3), std::invalid_argument);
}

TEST_CASE("tail mass of a centered bump is tiny, uniform field is ~ volume fraction") {
    auto g = make_grid(3, 32, 2.0 * M_PI);
    IcParams ic;
    ic.kind = IcKind::localized_bump;
    ic.amplitude = 1.0;
    ic.bump_radius_frac = 0.2;
    VectorField bump = make_initial(g, ic);
    // compact support up to the trigonometric-interpolation ringing floor
    CHECK(tail_mass(bump, 0.1) < 1e-4);

    std::vector<std::vector<double>> vals(3, std::vector<double>(g->point_count(), 1.0));
    VectorField uniform = vector_from_values(g, std::move(vals));
    const double frac = tail_mass(uniform, 0.1);
    // outer shell volume fraction 1 - 0.9^3 ~ 0.271, up to grid rounding
    CHECK(frac == doctest::Approx(1.0 - std::pow(0.9, 3)).epsilon(0.05));
}

TEST_CASE("integration-by-parts identity terms at p = 2 reduce to D_2") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_solenoidal(g, 19);
    const IbpTerms t = ibp_terms(u, 2.0);
    const double d2 = grad_l2_squared(u);
    CHECK(std::abs(t.lhs - d2) / d2 < 1e-10);
}
