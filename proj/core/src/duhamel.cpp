#include "nsap/duhamel.hpp"

#include <cmath>
#include <stdexcept>

#include "nsap/norms.hpp"
#include "nsap/operators.hpp"

namespace nsap {

namespace {

using CoeffVec = std::vector<std::vector<Complex>>;

std::vector<double> semigroup_table(const Grid& g, double nu, double t) {
    std::vector<double> d(g.point_count());
    const double ku2 = g.k_unit() * g.k_unit();
    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int i = 0; i < g.dim(); ++i) m2 += static_cast<double>(m[i]) * m[i];
        d[idx] = std::exp(-nu * ku2 * m2 * t);
    });
    return d;
}

CoeffVec coeffs_of(const VectorField& u) {
    CoeffVec c;
    for (const auto& s : u.comp) c.push_back(s.coeffs);
    return c;
}

double node_distance(GridPtr grid, const CoeffVec& a, const CoeffVec& b, double p) {
    CoeffVec diff(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) {
        diff[d].resize(a[d].size());
        for (std::size_t i = 0; i < a[d].size(); ++i) diff[d][i] = a[d][i] - b[d][i];
    }
    VectorField f = vector_from_coeffs(std::move(grid), std::move(diff));
    return lp_norm(f, p);
}

}  // namespace

VectorField heat_semigroup(const VectorField& u0, double t, double viscosity) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    const Grid& g = *u0.grid;
    const auto decay = semigroup_table(g, viscosity, t);
    CoeffVec c = coeffs_of(u0);
    for (auto& comp : c)
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= decay[i];
    return vector_from_coeffs(u0.grid, std::move(c), u0.solenoidal);
}

PicardResult picard_solve(const VectorField& u0, const PicardConfig& config) {
    if (!u0.solenoidal) throw std::invalid_argument("picard_solve: u0 must be solenoidal");
    if (config.time_nodes < 8 || config.time_nodes % 2 != 0)
        throw std::invalid_argument("picard_solve: time_nodes must be even and >= 8");
    if (!(config.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be > 0");
    if (!(config.t_end > 0.0)) throw std::invalid_argument("picard_solve: t_end must be > 0");

    const Grid& g = *u0.grid;
    GridPtr grid = u0.grid;
    const int M = config.time_nodes;
    const double h = config.t_end / M;
    const auto decay = semigroup_table(g, config.viscosity, h);  // one-interval semigroup

    // free-evolution ladder H_j = e^{t_j lap} u0
    std::vector<CoeffVec> free_part(static_cast<std::size_t>(M + 1));
    free_part[0] = coeffs_of(u0);
    for (int j = 1; j <= M; ++j) {
        free_part[static_cast<std::size_t>(j)] = free_part[static_cast<std::size_t>(j - 1)];
        for (auto& comp : free_part[static_cast<std::size_t>(j)])
            for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= decay[i];
    }

    std::vector<CoeffVec> iterate = free_part;  // u^(0)
    PicardResult result;
    result.t_end = config.t_end;

    auto finite = [](const std::vector<CoeffVec>& nodes) {
        for (const auto& node : nodes)
            for (const auto& comp : node)
                for (const auto& z : comp)
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    };

    double prev_distance = -1.0;
    for (int sweep = 1; sweep <= config.max_iter; ++sweep) {
        if (!finite(iterate)) break;  // diverged; report as not converged
        // nonlinear term at every node of the current iterate
        std::vector<CoeffVec> gterm(static_cast<std::size_t>(M + 1));
        for (int j = 0; j <= M; ++j) {
            VectorField uj = vector_from_coeffs(grid, iterate[static_cast<std::size_t>(j)],
                                                /*solenoidal=*/true);
            gterm[static_cast<std::size_t>(j)] =
                coeffs_of(nonlinear_term(uj, config.form, config.dealias));
        }

        // trapezoid ladder T_j = D (T_{j-1} + (h/2) G_{j-1}) + (h/2) G_j
        double distance = 0.0;
        CoeffVec trap(free_part[0].size());
        for (std::size_t d = 0; d < trap.size(); ++d)
            trap[d].assign(g.point_count(), Complex(0.0, 0.0));
        for (int j = 1; j <= M; ++j) {
            // trapezoid recurrence T_j = D (T_{j-1} + h/2 G_{j-1}) + h/2 G_j
            const auto& g_prev = gterm[static_cast<std::size_t>(j - 1)];
            const auto& g_curr = gterm[static_cast<std::size_t>(j)];
            for (std::size_t d = 0; d < trap.size(); ++d)
                for (std::size_t i = 0; i < trap[d].size(); ++i)
                    trap[d][i] = decay[i] * (trap[d][i] + 0.5 * h * g_prev[d][i]) +
                                 0.5 * h * g_curr[d][i];
            CoeffVec next(free_part[0].size());
            for (std::size_t d = 0; d < next.size(); ++d) {
                next[d].resize(g.point_count());
                const auto& fp = free_part[static_cast<std::size_t>(j)][d];
                for (std::size_t i = 0; i < next[d].size(); ++i)
                    next[d][i] = fp[i] - trap[d][i];
            }
            const double nd = node_distance(grid, next,
                                            iterate[static_cast<std::size_t>(j)],
                                            config.p_norm);
            // NaN-aware accumulation: a diverged node must poison the sweep
            if (!(nd <= distance)) distance = nd;
            iterate[static_cast<std::size_t>(j)] = std::move(next);
        }

        result.iterations = sweep;
        result.final_distance = distance;
        if (prev_distance > 0.0) result.contraction_ratios.push_back(distance / prev_distance);
        prev_distance = distance;
        if (distance <= config.tol) {
            result.converged = true;
            break;
        }
        if (!std::isfinite(distance)) break;  // diverged; report as not converged
    }

    result.nodes.reserve(static_cast<std::size_t>(M + 1));
    for (int j = 0; j <= M; ++j) {
        Snapshot s;
        s.t = j * h;
        s.u = vector_from_coeffs(grid, std::move(iterate[static_cast<std::size_t>(j)]),
                                 /*solenoidal=*/true);
        result.nodes.push_back(std::move(s));
    }
    return result;
}

PicardResult picard_solve_with_halving(const VectorField& u0, PicardConfig config,
                                       int max_halvings) {
    PicardResult r = picard_solve(u0, config);
    for (int k = 0; k < max_halvings && !r.converged; ++k) {
        config.t_end *= 0.5;
        r = picard_solve(u0, config);
    }
    return r;
}

double duhamel_residual(const VectorField& u0, const PicardResult& result,
                        const PicardConfig& config) {
    const Grid& g = *u0.grid;
    GridPtr grid = u0.grid;
    const int M = static_cast<int>(result.nodes.size()) - 1;
    const double h = result.t_end / M;
    const auto decay = semigroup_table(g, config.viscosity, h);

    std::vector<CoeffVec> gterm(static_cast<std::size_t>(M + 1));
    for (int j = 0; j <= M; ++j)
        gterm[static_cast<std::size_t>(j)] = coeffs_of(
            nonlinear_term(result.nodes[static_cast<std::size_t>(j)].u, config.form,
                           config.dealias));

    CoeffVec free_j = coeffs_of(u0);
    CoeffVec trap(free_j.size());
    for (std::size_t d = 0; d < trap.size(); ++d)
        trap[d].assign(g.point_count(), Complex(0.0, 0.0));

    double worst = 0.0;
    for (int j = 1; j <= M; ++j) {
        for (auto& comp : free_j)
            for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= decay[i];
        for (std::size_t d = 0; d < trap.size(); ++d)
            for (std::size_t i = 0; i < trap[d].size(); ++i)
                trap[d][i] = decay[i] * trap[d][i] +
                             0.5 * h * decay[i] * gterm[static_cast<std::size_t>(j - 1)][d][i] +
                             0.5 * h * gterm[static_cast<std::size_t>(j)][d][i];
        CoeffVec expect(free_j.size());
        for (std::size_t d = 0; d < expect.size(); ++d) {
            expect[d].resize(g.point_count());
            for (std::size_t i = 0; i < expect[d].size(); ++i)
                expect[d][i] = free_j[d][i] - trap[d][i];
        }
        worst = std::max(worst, node_distance(grid, expect,
                                              coeffs_of(result.nodes[static_cast<std::size_t>(j)].u),
                                              2.0));
    }
    return worst;
}

RateFit smoothing_rate_fit(const Trajectory& traj, double q, int time_order,
                           const std::vector<int>& alpha, double p_space) {
    if (time_order < 0 || time_order > 1)
        throw std::invalid_argument("smoothing_rate_fit: time derivative order must be 0 or 1");
    std::vector<double> xs, ys;
    int dim = 0;
    int alpha_total = 0;
    for (const auto& snap : traj.snapshots) {
        if (!(snap.t > 0.0)) continue;
        dim = snap.u.grid->dim();
        if (static_cast<int>(alpha.size()) > dim)
            throw std::invalid_argument("smoothing_rate_fit: alpha has too many axes");
        VectorField f = (time_order == 1) ? velocity_rhs(snap.u, traj.config) : snap.u;
        for (std::size_t ax = 0; ax < alpha.size(); ++ax) {
            for (int rep = 0; rep < alpha[ax]; ++rep) {
                for (auto& c : f.comp) c = spectral_derivative(c, static_cast<int>(ax));
            }
        }
        const double norm = lp_norm(f, q);
        if (!(norm > 0.0)) continue;
        xs.push_back(std::log(snap.t));
        ys.push_back(std::log(norm));
    }
    alpha_total = 0;
    for (const int a : alpha) alpha_total += a;
    if (xs.size() < 3)
        throw std::invalid_argument("smoothing_rate_fit: need at least 3 positive-time samples");

    // least squares y = a + b x; sigma_hat = -b
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("smoothing_rate_fit: degenerate time samples");
    const double b = sxy / sxx;

    RateFit fit;
    fit.sigma_hat = -b;
    fit.sigma_expected = time_order + 0.5 * alpha_total +
                         0.5 * dim * (1.0 / p_space - (q == kInfinityNorm ? 0.0 : 1.0 / q));
    fit.t_min = std::exp(xs.front());
    fit.t_max = std::exp(xs.back());
    fit.samples = static_cast<int>(n);
    double ss = 0.0;
    const double a0 = my - b * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (a0 + b * xs[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace nsap
