#include "nsap/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace nsap {

namespace {

int read_thread_cap() {
    const char* env = std::getenv("NSAP_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v <= 1) return 1;
    const long hw = static_cast<long>(std::thread::hardware_concurrency());
    return static_cast<int>(hw > 0 && v > hw ? hw : v);
}

/// Aligned staging buffers: plans are created on fftw-aligned arrays (SIMD
/// enabled) and executed on per-thread buffers of the same alignment class;
/// caller data is staged through them.
struct AlignedPair {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t size = 0;

    void ensure(std::size_t sz) {
        if (size >= sz) return;
        if (in) fftw_free(in);
        if (out) fftw_free(out);
        in = fftw_alloc_complex(sz);
        out = fftw_alloc_complex(sz);
        if (!in || !out) throw std::bad_alloc();
        size = sz;
    }
    ~AlignedPair() {
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

AlignedPair& staging(std::size_t sz) {
    thread_local AlignedPair pair;
    pair.ensure(sz);
    return pair;
}

struct PlanSet {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    PlanSet(int dim, int n) {
        const std::size_t sz = dim == 2 ? static_cast<std::size_t>(n) * n
                                        : static_cast<std::size_t>(n) * n * n;
        AlignedPair& pair = staging(sz);
        if (dim == 2) {
            forward = fftw_plan_dft_2d(n, n, pair.in, pair.out, FFTW_FORWARD, FFTW_MEASURE);
            backward = fftw_plan_dft_2d(n, n, pair.in, pair.out, FFTW_BACKWARD, FFTW_MEASURE);
        } else {
            forward = fftw_plan_dft_3d(n, n, n, pair.in, pair.out, FFTW_FORWARD, FFTW_MEASURE);
            backward = fftw_plan_dft_3d(n, n, n, pair.in, pair.out, FFTW_BACKWARD, FFTW_MEASURE);
        }
        if (!forward || !backward) throw std::runtime_error("fftw planning failed");
    }

    ~PlanSet() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

std::mutex g_planner_mutex;
int g_threads = 0;

const PlanSet& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> cache;
    std::lock_guard lock(g_planner_mutex);
    if (g_threads == 0) {
        g_threads = read_thread_cap();
#ifdef NSAP_FFTW_THREADS
        if (g_threads > 1) {
            fftw_init_threads();
            fftw_plan_with_nthreads(g_threads);
        }
#endif
    }
    auto key = std::make_pair(g.dim(), g.n());
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<PlanSet>(g.dim(), g.n())).first;
    return *it->second;
}

void execute(const Grid& g, bool forward_dir, const Complex* in, Complex* out) {
    const std::size_t sz = g.point_count();
    const PlanSet& p = plans_for(g);
    AlignedPair& pair = staging(sz);
    std::memcpy(static_cast<void*>(pair.in), static_cast<const void*>(in), sz * sizeof(Complex));
    fftw_execute_dft(forward_dir ? p.forward : p.backward, pair.in, pair.out);
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(pair.out), sz * sizeof(Complex));
}

}  // namespace

int planned_thread_count() {
    std::lock_guard lock(g_planner_mutex);
    return g_threads == 0 ? read_thread_cap() : g_threads;
}

void transform_forward_c2c(const Grid& g, std::span<const Complex> in,
                           std::span<Complex> out) {
    const std::size_t sz = g.point_count();
    if (in.size() != sz || out.size() != sz)
        throw std::invalid_argument("transform: buffer size mismatch");
    execute(g, true, in.data(), out.data());
    const double scale = 1.0 / static_cast<double>(sz);
    for (auto& c : out) c *= scale;
}

void transform_inverse_c2c(const Grid& g, std::span<const Complex> in,
                           std::span<Complex> out) {
    const std::size_t sz = g.point_count();
    if (in.size() != sz || out.size() != sz)
        throw std::invalid_argument("transform: buffer size mismatch");
    execute(g, false, in.data(), out.data());
}

void transform_forward(const Grid& g, std::span<const double> values,
                       std::span<Complex> coeffs) {
    const std::size_t sz = g.point_count();
    if (values.size() != sz || coeffs.size() != sz)
        throw std::invalid_argument("transform: buffer size mismatch");
    for (const double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("transform: non-finite sample");
    const PlanSet& p = plans_for(g);
    AlignedPair& pair = staging(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        pair.in[i][0] = values[i];
        pair.in[i][1] = 0.0;
    }
    fftw_execute_dft(p.forward, pair.in, pair.out);
    const double scale = 1.0 / static_cast<double>(sz);
    for (std::size_t i = 0; i < sz; ++i)
        coeffs[i] = Complex(pair.out[i][0] * scale, pair.out[i][1] * scale);
}

void transform_inverse(const Grid& g, std::span<const Complex> coeffs,
                       std::span<double> values) {
    const std::size_t sz = g.point_count();
    if (values.size() != sz || coeffs.size() != sz)
        throw std::invalid_argument("transform: buffer size mismatch");
    const PlanSet& p = plans_for(g);
    AlignedPair& pair = staging(sz);
    std::memcpy(static_cast<void*>(pair.in), static_cast<const void*>(coeffs.data()), sz * sizeof(Complex));
    fftw_execute_dft(p.backward, pair.in, pair.out);
    for (std::size_t i = 0; i < sz; ++i) values[i] = pair.out[i][0];
}

}  // namespace nsap
