#include "nsap/initial_conditions.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "nsap/checkpoint.hpp"
#include "nsap/norms.hpp"
#include "nsap/operators.hpp"
#include "nsap/projection.hpp"
#include "nsap/rng.hpp"

namespace nsap {

namespace {

VectorField scaled_to_rms(VectorField u, double amplitude) {
    const double rms = lp_norm(u, 2.0) / std::sqrt(u.grid->volume());
    if (rms == 0.0) return u;
    const double s = amplitude / rms;
    std::vector<std::vector<Complex>> comp;
    comp.reserve(u.comp.size());
    for (auto& c : u.comp) {
        for (auto& z : c.coeffs) z *= s;
        comp.push_back(std::move(c.coeffs));
    }
    return vector_from_coeffs(u.grid, std::move(comp), u.solenoidal);
}

VectorField make_taylor_green(GridPtr grid, double amplitude) {
    const Grid& g = *grid;
    const int n = g.n();
    const double kappa = g.k_unit();
    std::vector<std::vector<double>> comps(static_cast<std::size_t>(g.dim()));
    for (auto& c : comps) c.resize(g.point_count());
    if (g.dim() == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x = kappa * g.coord(i);
            for (int j = 0; j < n; ++j, ++idx) {
                const double y = kappa * g.coord(j);
                comps[0][idx] = amplitude * std::sin(x) * std::cos(y);
                comps[1][idx] = -amplitude * std::cos(x) * std::sin(y);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x = kappa * g.coord(i);
            for (int j = 0; j < n; ++j) {
                const double y = kappa * g.coord(j);
                for (int k = 0; k < n; ++k, ++idx) {
                    const double z = kappa * g.coord(k);
                    comps[0][idx] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
                    comps[1][idx] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
                    comps[2][idx] = 0.0;
                }
            }
        }
    }
    VectorField u = vector_from_values(grid, std::move(comps));
    u.solenoidal = true;  // exactly divergence-free mode pattern
    return u;
}

VectorField make_random_solenoidal(GridPtr grid, const IcParams& p) {
    const Grid& g = *grid;
    const int n = g.n();
    const int dim = g.dim();
    const int cut = g.dealias_cutoff();
    const double k0 = p.peak_k;
    CounterRng rng(p.seed);

    std::vector<std::vector<Complex>> comp(static_cast<std::size_t>(dim));
    for (auto& c : comp) c.assign(g.point_count(), Complex(0.0, 0.0));

    auto conj_index = [n](int i) { return i == 0 ? 0 : n - i; };

    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        bool in_band = true;
        for (int d = 0; d < dim; ++d) {
            m2 += static_cast<double>(m[d]) * m[d];
            if (m[d] > cut || m[d] < -cut) in_band = false;
        }
        if (!in_band || m2 == 0.0) return;

        // canonical representative of each conjugate pair: smaller flat index
        int iax[3] = {0, 0, 0};
        {
            std::size_t rem = idx;
            for (int d = dim - 1; d >= 0; --d) {
                iax[d] = static_cast<int>(rem % static_cast<std::size_t>(n));
                rem /= static_cast<std::size_t>(n);
            }
        }
        std::size_t cidx = 0;
        for (int d = 0; d < dim; ++d)
            cidx = cidx * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(conj_index(iax[d]));
        if (cidx < idx) return;  // filled from the partner
        const bool self_conjugate = (cidx == idx);

        const double kmag = std::sqrt(m2);
        // shell energy k^4 exp(-k^2/k0^2) spread over the shell ~ k^{N-1}
        const double shell = std::pow(kmag, 4.0) * std::exp(-m2 / (k0 * k0));
        const double amp = std::sqrt(shell / std::pow(kmag, dim - 1.0));

        for (int d = 0; d < dim; ++d) {
            const std::uint64_t counter = (idx * static_cast<std::uint64_t>(dim) +
                                           static_cast<std::uint64_t>(d)) * 2;
            const auto [g1, g2] = rng.gaussian_pair(counter);
            const Complex z = self_conjugate ? Complex(g1, 0.0) : Complex(g1, g2);
            comp[static_cast<std::size_t>(d)][idx] = amp * z;
            if (!self_conjugate) comp[static_cast<std::size_t>(d)][cidx] = amp * std::conj(z);
        }
    });

    spectral::leray_project_inplace(g, comp);
    return vector_from_coeffs(grid, std::move(comp), /*solenoidal=*/true);
}

/// Modulated shear: (sin kz, cos kz, 0.4 cos(k(x + 2y))) in 3D, so the
/// pointwise speed never drops below the amplitude; the quadratures of
/// |u|^{p-2}-weighted integrands stay spectrally accurate. The 2D variant is
/// (sin ky, 0.4 cos kx)-like with speed bounded away from zero only in 3D.
VectorField make_shear(GridPtr grid, double amplitude) {
    const Grid& g = *grid;
    const int n = g.n();
    const double k = g.k_unit();
    std::vector<std::vector<double>> comps(static_cast<std::size_t>(g.dim()));
    for (auto& c : comps) c.resize(g.point_count());
    if (g.dim() == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(i);
            for (int j = 0; j < n; ++j, ++idx) {
                const double y = g.coord(j);
                comps[0][idx] = amplitude * std::sin(k * y);
                comps[1][idx] = amplitude * 0.4 * std::cos(k * x);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(i);
            for (int j = 0; j < n; ++j) {
                const double y = g.coord(j);
                for (int kk = 0; kk < n; ++kk, ++idx) {
                    const double z = g.coord(kk);
                    comps[0][idx] = amplitude * std::sin(k * z);
                    comps[1][idx] = amplitude * std::cos(k * z);
                    comps[2][idx] = amplitude * 0.4 * std::cos(k * (x + 2.0 * y));
                }
            }
        }
    }
    VectorField u = vector_from_values(grid, std::move(comps));
    u.solenoidal = true;  // each component is independent of its own axis
    return u;
}

/// Deterministic borderline-L^p profile: coefficients |k|^{-(N - N/p)} over
/// the full retained band, phases aligned so all modes add coherently at the
/// box center. This is the periodic analogue of the |x|^{-N/p} kernel, the
/// profile that saturates the L^p smoothing rates; solenoidality comes from
/// a per-mode projection factor (3D) or the perpendicular direction (2D).
VectorField make_critical_spectrum(GridPtr grid, double p_crit) {
    const Grid& g = *grid;
    const int dim = g.dim();
    const int cut = g.dealias_cutoff();
    const double expo = dim - dim / p_crit;

    std::vector<std::vector<Complex>> comp(static_cast<std::size_t>(dim));
    for (auto& c : comp) c.assign(g.point_count(), Complex(0.0, 0.0));

    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        int msum = 0;
        for (int d = 0; d < dim; ++d) {
            if (m[d] > cut || m[d] < -cut) return;
            m2 += static_cast<double>(m[d]) * m[d];
            msum += m[d];
        }
        if (m2 == 0.0) return;
        // e^{-i k . x0} at the box center is (-1)^{sum of modes}
        const double aligned = (msum % 2 == 0 ? 1.0 : -1.0) * std::pow(m2, -0.5 * expo);
        if (dim == 3) {
            // z-aligned with the per-mode solenoidal projection; the factor
            // is even in k, so the coefficients stay real and Hermitian.
            for (int j = 0; j < 3; ++j) {
                const double proj = (j == 2 ? 1.0 : 0.0) - m[j] * m[2] / m2;
                comp[static_cast<std::size_t>(j)][idx] = Complex(aligned * proj, 0.0);
            }
        } else {
            // perpendicular direction is odd in k: imaginary coefficients
            // keep the field real
            const double inv = 1.0 / std::sqrt(m2);
            comp[0][idx] = Complex(0.0, -m[1] * inv * aligned);
            comp[1][idx] = Complex(0.0, m[0] * inv * aligned);
        }
    });
    return vector_from_coeffs(grid, std::move(comp), /*solenoidal=*/true);
}

/// Smooth mollifier chi(s) = exp(1 - 1/(1-s^2)) on s < 1, zero outside.
double mollifier(double s) {
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

/// Curl of a scalar potential profile phi(r): 2D gives the perpendicular
/// gradient, 3D the curl of phi * a for a fixed unit vector a. Both are
/// exactly divergence-free and inherit phi's support.
VectorField curl_of_profile(GridPtr grid, const std::function<double(double)>& profile,
                            double radius) {
    const Grid& g = *grid;
    const int n = g.n();
    const double c0 = 0.5 * g.box_length();
    std::vector<double> phi(g.point_count());
    if (g.dim() == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double dx = g.coord(i) - c0;
            for (int j = 0; j < n; ++j, ++idx) {
                const double dy = g.coord(j) - c0;
                phi[idx] = profile(std::sqrt(dx * dx + dy * dy) / radius);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double dx = g.coord(i) - c0;
            for (int j = 0; j < n; ++j) {
                const double dy = g.coord(j) - c0;
                for (int k = 0; k < n; ++k, ++idx) {
                    const double dz = g.coord(k) - c0;
                    phi[idx] = profile(std::sqrt(dx * dx + dy * dy + dz * dz) / radius);
                }
            }
        }
    }
    ScalarField psi = scalar_from_values(grid, std::move(phi));
    std::vector<std::vector<Complex>> comp;
    if (g.dim() == 2) {
        comp.push_back(spectral_derivative(psi, 1).coeffs);   //  d/dy psi
        ScalarField ddx = spectral_derivative(psi, 0);
        for (auto& z : ddx.coeffs) z = -z;                    // -d/dx psi
        comp.push_back(std::move(ddx.coeffs));
    } else {
        // curl(psi * a) = grad(psi) x a, a = (0.36, 0.48, 0.80)
        const double a[3] = {0.36, 0.48, 0.80};
        VectorField grad_psi = gradient(psi);
        for (int d = 0; d < 3; ++d) {
            const int d1 = (d + 1) % 3;
            const int d2 = (d + 2) % 3;
            std::vector<Complex> c(g.point_count());
            for (std::size_t x = 0; x < c.size(); ++x)
                c[x] = grad_psi.comp[static_cast<std::size_t>(d1)].coeffs[x] * a[d2] -
                       grad_psi.comp[static_cast<std::size_t>(d2)].coeffs[x] * a[d1];
            comp.push_back(std::move(c));
        }
    }
    spectral::leray_project_inplace(g, comp);  // no-op on the curl, zeroes the mean
    return vector_from_coeffs(grid, std::move(comp), /*solenoidal=*/true);
}

}  // namespace

IcKind ic_kind_from_string(const std::string& s) {
    if (s == "taylor_green") return IcKind::taylor_green;
    if (s == "random_solenoidal") return IcKind::random_solenoidal;
    if (s == "localized_bump") return IcKind::localized_bump;
    if (s == "critical_spectrum") return IcKind::critical_spectrum;
    if (s == "shear") return IcKind::shear;
    if (s == "from_checkpoint") return IcKind::from_checkpoint;
    throw std::invalid_argument("unknown ic kind: " + s);
}

std::string to_string(IcKind kind) {
    switch (kind) {
        case IcKind::taylor_green: return "taylor_green";
        case IcKind::random_solenoidal: return "random_solenoidal";
        case IcKind::localized_bump: return "localized_bump";
        case IcKind::critical_spectrum: return "critical_spectrum";
        case IcKind::shear: return "shear";
        case IcKind::from_checkpoint: return "from_checkpoint";
    }
    return "?";
}

VectorField make_initial(GridPtr grid, const IcParams& params) {
    if (!(params.amplitude > 0.0))
        throw std::invalid_argument("make_initial: amplitude must be > 0");
    switch (params.kind) {
        case IcKind::taylor_green:
            return make_taylor_green(grid, params.amplitude);
        case IcKind::shear:
            return make_shear(grid, params.amplitude);
        case IcKind::random_solenoidal:
            return scaled_to_rms(make_random_solenoidal(grid, params), params.amplitude);
        case IcKind::localized_bump: {
            auto profile = [](double s) { return mollifier(s); };
            VectorField u = curl_of_profile(grid, profile,
                                            params.bump_radius_frac * grid->box_length());
            return scaled_to_rms(std::move(u), params.amplitude);
        }
        case IcKind::critical_spectrum:
            return scaled_to_rms(make_critical_spectrum(grid, params.critical_p),
                                 params.amplitude);
        case IcKind::from_checkpoint: {
            Checkpoint ck = read_checkpoint(params.checkpoint_path);
            if (!ck.u.grid->compatible(*grid))
                throw std::invalid_argument("make_initial: checkpoint grid mismatch");
            return leray_project(ck.u);
        }
    }
    throw std::invalid_argument("make_initial: unknown ic kind");
}

}  // namespace nsap
