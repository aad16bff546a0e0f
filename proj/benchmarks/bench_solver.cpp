#include <benchmark/benchmark.h>

#include "nsap/initial_conditions.hpp"
#include "nsap/monitor.hpp"
#include "nsap/solver.hpp"

namespace {

nsap::VectorField bench_ic(int n) {
    nsap::IcParams ic;
    ic.kind = nsap::IcKind::random_solenoidal;
    ic.amplitude = 0.05;
    ic.peak_k = 3.0;
    ic.seed = 11;
    return nsap::make_initial(nsap::make_grid(3, n, 2.0 * M_PI), ic);
}

void BM_nonlinear_divergence(benchmark::State& state) {
    auto u = bench_ic(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto n = nsap::nonlinear_term(u, nsap::NonlinearForm::divergence);
        benchmark::DoNotOptimize(n.comp[0].coeffs.data());
    }
}
BENCHMARK(BM_nonlinear_divergence)->Arg(32)->Arg(64);

void BM_nonlinear_skew(benchmark::State& state) {
    auto u = bench_ic(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto n = nsap::nonlinear_term(u, nsap::NonlinearForm::skew_symmetric);
        benchmark::DoNotOptimize(n.comp[0].coeffs.data());
    }
}
BENCHMARK(BM_nonlinear_skew)->Arg(32)->Arg(64);

void BM_step(benchmark::State& state) {
    auto u = bench_ic(static_cast<int>(state.range(0)));
    nsap::SolverConfig cfg;
    cfg.dt = 1e-3;
    nsap::Snapshot s{0.0, u};
    s = nsap::step(s, cfg);  // warm the plan cache
    for (auto _ : state) {
        s = nsap::step(s, cfg);
        benchmark::DoNotOptimize(s.u.comp[0].coeffs.data());
    }
}
BENCHMARK(BM_step)->Arg(32)->Arg(64);

void BM_diagnostic_record(benchmark::State& state) {
    auto u = bench_ic(64);
    nsap::MonitorConfig cfg;
    nsap::Snapshot s{0.0, u};
    for (auto _ : state) {
        auto rec = nsap::compute_record(s, cfg);
        benchmark::DoNotOptimize(rec.l2);
    }
}
BENCHMARK(BM_diagnostic_record);

}  // namespace
