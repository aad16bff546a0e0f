#include <benchmark/benchmark.h>

#include "nsap/fft.hpp"
#include "nsap/initial_conditions.hpp"
#include "nsap/norms.hpp"
#include "nsap/projection.hpp"

namespace {

nsap::VectorField test_field(int dim, int n) {
    nsap::IcParams ic;
    ic.kind = nsap::IcKind::random_solenoidal;
    ic.amplitude = 0.1;
    ic.peak_k = 3.0;
    ic.seed = 7;
    return nsap::make_initial(nsap::make_grid(dim, n, 2.0 * M_PI), ic);
}

void BM_transform_roundtrip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto g = nsap::make_grid(3, n, 2.0 * M_PI);
    std::vector<double> vals(g->point_count(), 1.0);
    std::vector<nsap::Complex> coeffs(g->point_count());
    nsap::transform_forward(*g, vals, coeffs);  // warm the plan cache
    for (auto _ : state) {
        nsap::transform_forward(*g, vals, coeffs);
        nsap::transform_inverse(*g, coeffs, vals);
        benchmark::DoNotOptimize(vals.data());
    }
}
BENCHMARK(BM_transform_roundtrip)->Arg(32)->Arg(64);

void BM_leray_project(benchmark::State& state) {
    auto u = test_field(3, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto p = nsap::leray_project(u);
        benchmark::DoNotOptimize(p.comp[0].coeffs.data());
    }
}
BENCHMARK(BM_leray_project)->Arg(32)->Arg(64);

void BM_lp_norm(benchmark::State& state) {
    auto u = test_field(3, 64);
    const double q = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(nsap::lp_norm(u, q));
}
BENCHMARK(BM_lp_norm)->Arg(2)->Arg(4)->Arg(12)->Arg(27);

void BM_dissipation(benchmark::State& state) {
    auto u = test_field(3, 64);
    for (auto _ : state) benchmark::DoNotOptimize(nsap::dissipation(u, 4.0));
}
BENCHMARK(BM_dissipation);

}  // namespace
