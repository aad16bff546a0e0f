#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsap/initial_conditions.hpp"
#include "nsap/norms.hpp"
#include "nsap/operators.hpp"
#include "nsap/projection.hpp"

using namespace nsap;

namespace {

VectorField random_field(GridPtr g, std::uint64_t seed, bool project = false) {
    IcParams ic;
    ic.kind = IcKind::random_solenoidal;
    ic.amplitude = 1.0;
    ic.peak_k = 3.0;
    ic.seed = seed;
    VectorField u = make_initial(g, ic);
    if (project) return u;
    // wreck solenoidality deterministically to obtain a generic field
    for (std::size_t d = 0; d < u.comp.size(); ++d)
        for (std::size_t i = 0; i < u.comp[d].values.size(); ++i)
            u.comp[d].values[i] += 0.3 * u.comp[(d + 1) % u.comp.size()].values[i];
    std::vector<std::vector<double>> vals;
    for (auto& c : u.comp) vals.push_back(std::move(c.values));
    return vector_from_values(g, std::move(vals));
}

double l2_distance(const VectorField& a, const VectorField& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.comp.size(); ++d)
        for (std::size_t i = 0; i < a.comp[d].values.size(); ++i) {
            const double diff = a.comp[d].values[i] - b.comp[d].values[i];
            acc += diff * diff;
        }
    return std::sqrt(acc * a.grid->cell_volume());
}

}  // namespace

TEST_CASE("Riesz transform maps cos to sin on a single mode") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    const int n = g->n();
    std::vector<double> cosx(g->point_count()), sinx(g->point_count());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                cosx[idx] = std::cos(g->coord(i));
                sinx[idx] = std::sin(g->coord(i));
            }
    ScalarField f = scalar_from_values(g, std::move(cosx));
    ScalarField r = riesz_apply(f, 0);
    // R_x with symbol -i k_x/|k|: acting on cos(x) gives sin(x)
    double worst = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - sinx[i]));
    CHECK(worst < 1e-13);
}

TEST_CASE("Riesz transform of a constant vanishes") {
    auto g = make_grid(2, 8, 1.0);
    ScalarField f = scalar_from_values(g, std::vector<double>(g->point_count(), 2.0));
    ScalarField r = riesz_apply(f, 1);
    for (const double v : r.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("sum_j R_j R_j = -identity on mean-free fields") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = random_field(g, 11);
    ScalarField f = u.comp[0];
    f.coeffs[0] = Complex(0, 0);  // remove the mean
    f = scalar_from_coeffs(g, f.coeffs);
    std::vector<double> acc(g->point_count(), 0.0);
    for (int j = 0; j < 3; ++j) {
        ScalarField rr = riesz_apply(riesz_apply(f, j), j);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += rr.values[i];
    }
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        worst = std::max(worst, std::abs(acc[i] + f.values[i]));
        scale = std::max(scale, std::abs(f.values[i]));
    }
    CHECK(worst / scale < 1e-12);
}

TEST_CASE("pressure of the zero field is zero") {
    auto g = make_grid(3, 8, 2.0 * M_PI);
    ScalarField p = pressure_from_velocity(zero_vector(g));
    for (const double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("2D Taylor-Green pressure is (cos 2x + cos 2y)/4 under our sign convention") {
    auto g = make_grid(2, 64, 2.0 * M_PI);
    IcParams ic;
    ic.kind = IcKind::taylor_green;
    ic.amplitude = 1.0;
    VectorField u = make_initial(g, ic);
    ScalarField p = pressure_from_velocity(u);
    const int n = g->n();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double expect =
                0.25 * (std::cos(2.0 * g->coord(i)) + std::cos(2.0 * g->coord(j)));
            worst = std::max(worst,
                             std::abs(p.values[static_cast<std::size_t>(i) * n + j] - expect));
        }
    CHECK(worst < 1e-13);
}

TEST_CASE("pressure satisfies -lap P = div div (u x u)") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = leray_project(random_field(g, 17));
    ScalarField p = pressure_from_velocity(u);
    ScalarField lhs = laplacian(p);
    for (auto& z : lhs.coeffs) z = -z;
    lhs = scalar_from_coeffs(g, lhs.coeffs);

    TensorField t = outer_product(u, u, true);
    std::vector<Complex> rhs(g->point_count(), Complex(0, 0));
    const double ku2 = g->k_unit() * g->k_unit();
    spectral::for_each_mode(*g, [&](std::size_t idx, const int* m) {
        if (idx == 0) return;  // pressure is mean-free by convention
        Complex acc(0, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                acc += -ku2 * m[i] * m[j] * t.at(i, j).coeffs[idx];
        rhs[idx] = acc;
    });
    double worst = 0.0, scale = 0.0;
    for (std::size_t x = 0; x < rhs.size(); ++x) {
        worst = std::max(worst, std::abs(lhs.coeffs[x] - rhs[x]));
        scale = std::max(scale, std::abs(rhs[x]));
    }
    CHECK(worst / scale < 1e-10);
}

TEST_CASE("projection annihilates gradients") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    ScalarField phi = random_field(g, 23).comp[0];
    VectorField grad_phi = gradient(phi);
    VectorField projected = leray_project(grad_phi);
    const double scale = lp_norm(grad_phi, 2.0);
    CHECK(lp_norm(projected, 2.0) <= 1e-12 * scale);
}

TEST_CASE("projection is idempotent") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField f = random_field(g, 29);
    VectorField once = leray_project(f);
    VectorField twice = leray_project(once);
    CHECK(l2_distance(once, twice) <= 1e-12 * lp_norm(once, 2.0));
    CHECK(once.solenoidal);
    CHECK(divergence_residual(once) <= 1e-10);
}

TEST_CASE("(sin y, sin x, 0) is untouched by the projection") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    const int n = g->n();
    std::vector<double> ux(g->point_count()), uy(g->point_count()),
        uz(g->point_count(), 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                ux[idx] = std::sin(g->coord(j));  // sin y
                uy[idx] = std::sin(g->coord(i));  // sin x
            }
    VectorField u = vector_from_values(g, {std::move(ux), std::move(uy), std::move(uz)});
    VectorField p = leray_project(u);
    CHECK(l2_distance(u, p) <= 1e-13 * lp_norm(u, 2.0));
}

TEST_CASE("projection orthogonality against gradients") {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField f = random_field(g, 31);
    ScalarField phi = random_field(g, 37).comp[1];
    VectorField pf = leray_project(f);
    VectorField gphi = gradient(phi);
    double inner = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < pf.comp[0].values.size(); ++i)
            inner += pf.comp[static_cast<std::size_t>(d)].values[i] *
                     gphi.comp[static_cast<std::size_t>(d)].values[i];
    inner *= g->cell_volume();
    CHECK(std::abs(inner) <= 1e-10 * lp_norm(f, 2.0) * lp_norm(gphi, 2.0));
}

TEST_CASE("two-route nonlinearity identity") {
    // P[div(u x u)] = div(u x u) + grad L(u x u) for solenoidal u
    auto g = make_grid(3, 16, 2.0 * M_PI);
    VectorField u = leray_project(random_field(g, 41));

    TensorField t = outer_product(u, u, true);
    std::vector<std::vector<Complex>> divT;
    for (int i = 0; i < 3; ++i) {
        std::vector<Complex> acc(g->point_count(), Complex(0, 0));
        for (int j = 0; j < 3; ++j) {
            ScalarField d = spectral_derivative(t.at(i, j), j);
            for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += d.coeffs[x];
        }
        divT.push_back(std::move(acc));
    }
    // route 1: Leray projection
    auto route1 = divT;
    spectral::leray_project_inplace(*g, route1);
    // route 2: the gradient of the Riesz-trace pressure completes the
    // projection: P[div T] = div T + grad L(T)
    ScalarField L = tensor_riesz_trace(t);
    VectorField gradL = gradient(L);
    double worst = 0.0, scale = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t x = 0; x < divT[0].size(); ++x) {
            const Complex r2 = divT[static_cast<std::size_t>(d)][x] +
                               gradL.comp[static_cast<std::size_t>(d)].coeffs[x];
            const Complex r1 = route1[static_cast<std::size_t>(d)][x];
            if (x == 0) continue;  // mean handled by convention
            worst = std::max(worst, std::abs(r1 - r2));
            scale = std::max(scale, std::abs(r1));
        }
    CHECK(worst / scale < 1e-10);
}
