#include "nsap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsap/fft.hpp"
#include "nsap/operators.hpp"
#include "nsap/projection.hpp"

namespace nsap {

namespace {

using CoeffVec = std::vector<std::vector<Complex>>;  // dim components
using RealVec = std::vector<std::vector<double>>;

struct Workspace {
    const Grid& g;
    // fixed-size pools so handed-out references never move
    std::vector<std::vector<double>> real_pool{32};
    std::vector<std::vector<Complex>> cplx_pool{32};

    explicit Workspace(const Grid& grid) : g(grid) {}

    std::vector<double>& real_buf(std::size_t slot) {
        auto& b = real_pool.at(slot);
        if (b.size() != g.point_count()) b.resize(g.point_count());
        return b;
    }
    std::vector<Complex>& cplx_buf(std::size_t slot) {
        auto& b = cplx_pool.at(slot);
        if (b.size() != g.point_count()) b.resize(g.point_count());
        return b;
    }
};

/// Real-space samples of each component of `c`.
void to_real(const Grid& g, const CoeffVec& c, Workspace& ws, std::size_t slot0,
             std::vector<std::vector<double>*>& out) {
    out.clear();
    for (std::size_t d = 0; d < c.size(); ++d) {
        auto& buf = ws.real_buf(slot0 + d);
        transform_inverse(g, c[d], buf);
        out.push_back(&buf);
    }
}

/// Divergence-form quadratic term: out_i = sum_j i k_j T_ij^hat with the
/// symmetrized product T_ij = (a_i b_j + b_i a_j)/2, the bilinear
/// polarization of div(u (x) u). One forward transform per distinct T_ij.
void divergence_form_bilinear(const Grid& g, const std::vector<std::vector<double>*>& a,
                              const std::vector<std::vector<double>*>& b, Workspace& ws,
                              CoeffVec& out) {
    const int dim = g.dim();
    const std::size_t sz = g.point_count();
    auto& prod = ws.real_buf(20);
    auto& deriv = ws.cplx_buf(21);
    auto& prod_hat = ws.cplx_buf(20);
    out.assign(static_cast<std::size_t>(dim), std::vector<Complex>(sz, Complex(0, 0)));
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const auto& ai = *a[static_cast<std::size_t>(i)];
            const auto& bj = *b[static_cast<std::size_t>(j)];
            const auto& aj = *a[static_cast<std::size_t>(j)];
            const auto& bi = *b[static_cast<std::size_t>(i)];
            if (i == j) {
                for (std::size_t x = 0; x < sz; ++x) prod[x] = ai[x] * bi[x];
            } else {
                for (std::size_t x = 0; x < sz; ++x)
                    prod[x] = 0.5 * (ai[x] * bj[x] + bi[x] * aj[x]);
            }
            transform_forward(g, prod, prod_hat);
            // d_j T_ij accumulates into row i, d_i T_ij into row j
            spectral::derivative(g, prod_hat, j, deriv);
            auto& acc_i = out[static_cast<std::size_t>(i)];
            for (std::size_t x = 0; x < sz; ++x) acc_i[x] += deriv[x];
            if (i != j) {
                spectral::derivative(g, prod_hat, i, deriv);
                auto& acc_j = out[static_cast<std::size_t>(j)];
                for (std::size_t x = 0; x < sz; ++x) acc_j[x] += deriv[x];
            }
        }
    }
}

/// Advective-form bilinear term: out_i = ((a . grad) b + (b . grad) a)_i / 2.
void advective_form_bilinear(const Grid& g, const CoeffVec& a_hat,
                             const std::vector<std::vector<double>*>& a,
                             const CoeffVec& b_hat,
                             const std::vector<std::vector<double>*>& b, Workspace& ws,
                             CoeffVec& out) {
    const int dim = g.dim();
    const std::size_t sz = g.point_count();
    const bool same = (&a_hat == &b_hat);
    auto& deriv_hat = ws.cplx_buf(22);
    auto& deriv = ws.real_buf(22);
    auto& acc = ws.real_buf(23);
    out.assign(static_cast<std::size_t>(dim), std::vector<Complex>(sz));
    for (int i = 0; i < dim; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < dim; ++j) {
            // a_j d_j b_i
            spectral::derivative(g, b_hat[static_cast<std::size_t>(i)], j, deriv_hat);
            transform_inverse(g, deriv_hat, deriv);
            const auto& aj = *a[static_cast<std::size_t>(j)];
            for (std::size_t x = 0; x < sz; ++x) acc[x] += aj[x] * deriv[x];
            if (!same) {
                // b_j d_j a_i
                spectral::derivative(g, a_hat[static_cast<std::size_t>(i)], j, deriv_hat);
                transform_inverse(g, deriv_hat, deriv);
                const auto& bj = *b[static_cast<std::size_t>(j)];
                for (std::size_t x = 0; x < sz; ++x) acc[x] += bj[x] * deriv[x];
            }
        }
        if (same) {
            transform_forward(g, acc, out[static_cast<std::size_t>(i)]);
        } else {
            for (std::size_t x = 0; x < sz; ++x) acc[x] *= 0.5;
            transform_forward(g, acc, out[static_cast<std::size_t>(i)]);
        }
    }
}

/// Projected bilinear nonlinearity B(a, b) such that B(u, u) is the chosen
/// form of P div(u (x) u). Inputs are coefficient arrays; the result is
/// dealiased (optional) and Leray-projected.
void projected_bilinear(const Grid& g, const CoeffVec& a_hat, const CoeffVec& b_hat,
                        NonlinearForm form, bool dealias, Workspace& ws, CoeffVec& out) {
    std::vector<std::vector<double>*> a_real, b_real;
    to_real(g, a_hat, ws, 0, a_real);
    if (&a_hat == &b_hat) {
        b_real = a_real;
    } else {
        to_real(g, b_hat, ws, 4, b_real);
    }

    divergence_form_bilinear(g, a_real, b_real, ws, out);

    if (form == NonlinearForm::skew_symmetric) {
        CoeffVec adv;
        advective_form_bilinear(g, a_hat, a_real, b_hat, b_real, ws, adv);
        for (std::size_t d = 0; d < out.size(); ++d) {
            auto& o = out[d];
            const auto& v = adv[d];
            for (std::size_t x = 0; x < o.size(); ++x) o[x] = 0.5 * (o[x] + v[x]);
        }
    }
    if (dealias)
        for (auto& c : out) spectral::dealias_mask(g, c);
    else
        for (auto& c : out) spectral::zero_nyquist(g, c);
    spectral::leray_project_inplace(g, out);
}

CoeffVec coeffs_of(const VectorField& u) {
    CoeffVec c;
    c.reserve(u.comp.size());
    for (const auto& s : u.comp) c.push_back(s.coeffs);
    return c;
}

bool coeffs_finite(const CoeffVec& c) {
    for (const auto& comp : c)
        for (const auto& z : comp)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

/// dt*phi1 and dt*phi2 with phi1(z) = (e^z-1)/z, phi2(z) = (e^z-1-z)/z^2.
double phi1(double z) {
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.5) {
        // sum z^j/(j+2)!, j = 0..17
        double term = 0.5;  // 1/2!
        double sum = term;
        for (int j = 1; j < 18; ++j) {
            term *= z / (j + 2);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

/// Precomputed per-mode ETD2RK multipliers for one (grid, nu, dt).
struct EtdTables {
    double dt = -1.0;
    std::vector<double> E, P1, P2;

    void build(const Grid& g, double nu, double step_dt) {
        dt = step_dt;
        const std::size_t sz = g.point_count();
        E.resize(sz);
        P1.resize(sz);
        P2.resize(sz);
        const double ku2 = g.k_unit() * g.k_unit();
        spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
            double m2 = 0.0;
            for (int d = 0; d < g.dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
            const double z = -nu * ku2 * m2 * step_dt;
            E[idx] = std::exp(z);
            P1[idx] = step_dt * phi1(z);
            P2[idx] = step_dt * phi2(z);
        });
    }
};

class Stepper {
  public:
    Stepper(GridPtr grid, const SolverConfig& config)
        : grid_(std::move(grid)), cfg_(config), ws_(*grid_) {
        tables_.build(*grid_, cfg_.viscosity, cfg_.dt);
    }

    const Grid& grid() const { return *grid_; }

    /// -N(u), the nonlinear part of the right-hand side.
    void rhs_nonlinear(const CoeffVec& u, CoeffVec& out) {
        projected_bilinear(*grid_, u, u, cfg_.nonlinear_form, cfg_.dealias, ws_, out);
        negate(out);
    }

    /// -N_pert(v, w) for the perturbation equation.
    void rhs_perturbed(const CoeffVec& v, const CoeffVec& w, CoeffVec& out) {
        // 2 div(v (x)_s w) + div(w (x) w), each piece in the configured form
        CoeffVec cross;
        projected_bilinear(*grid_, v, w, cfg_.nonlinear_form, cfg_.dealias, ws_, cross);
        projected_bilinear(*grid_, w, w, cfg_.nonlinear_form, cfg_.dealias, ws_, out);
        for (std::size_t d = 0; d < out.size(); ++d) {
            auto& o = out[d];
            const auto& c = cross[d];
            for (std::size_t x = 0; x < o.size(); ++x) o[x] = -(o[x] + 2.0 * c[x]);
        }
    }

    void advance(CoeffVec& u, double dt) {
        ensure_tables(dt);
        if (cfg_.stokes_only) {
            apply_exponential(u);
            return;
        }
        CoeffVec n1, n2;
        rhs_nonlinear(u, n1);
        CoeffVec a = combine(u, n1);  // E u + P1 N1
        rhs_nonlinear(a, n2);
        correct(a, n1, n2);
        u = std::move(a);
        spectral::leray_project_inplace(*grid_, u);
    }

    /// Lockstep coupled step: both fields advance through the same stages,
    /// with w's stage nonlinearity driven by v's stage value.
    void advance_coupled(CoeffVec& v, CoeffVec& w, double dt) {
        ensure_tables(dt);
        if (cfg_.stokes_only) {
            apply_exponential(v);
            apply_exponential(w);
            return;
        }
        CoeffVec nv1, nw1, nv2, nw2;
        rhs_nonlinear(v, nv1);
        rhs_perturbed(v, w, nw1);
        CoeffVec av = combine(v, nv1);
        CoeffVec aw = combine(w, nw1);
        rhs_nonlinear(av, nv2);
        rhs_perturbed(av, aw, nw2);
        correct(av, nv1, nv2);
        correct(aw, nw1, nw2);
        v = std::move(av);
        w = std::move(aw);
        spectral::leray_project_inplace(*grid_, v);
        spectral::leray_project_inplace(*grid_, w);
    }

  private:
    void ensure_tables(double dt) {
        if (tables_.dt != dt) tables_.build(*grid_, cfg_.viscosity, dt);
    }

    void negate(CoeffVec& c) {
        for (auto& comp : c)
            for (auto& z : comp) z = -z;
    }

    void apply_exponential(CoeffVec& u) {
        for (auto& comp : u)
            for (std::size_t x = 0; x < comp.size(); ++x) comp[x] *= tables_.E[x];
    }

    CoeffVec combine(const CoeffVec& u, const CoeffVec& n1) {
        CoeffVec a(u.size());
        for (std::size_t d = 0; d < u.size(); ++d) {
            a[d].resize(u[d].size());
            const auto& uu = u[d];
            const auto& nn = n1[d];
            auto& aa = a[d];
            for (std::size_t x = 0; x < aa.size(); ++x)
                aa[x] = tables_.E[x] * uu[x] + tables_.P1[x] * nn[x];
        }
        return a;
    }

    void correct(CoeffVec& a, const CoeffVec& n1, const CoeffVec& n2) {
        for (std::size_t d = 0; d < a.size(); ++d) {
            auto& aa = a[d];
            const auto& x1 = n1[d];
            const auto& x2 = n2[d];
            for (std::size_t x = 0; x < aa.size(); ++x)
                aa[x] += tables_.P2[x] * (x2[x] - x1[x]);
        }
    }

    GridPtr grid_;
    SolverConfig cfg_;
    Workspace ws_;
    EtdTables tables_;
};

Snapshot materialize(GridPtr grid, const CoeffVec& c, double t) {
    Snapshot s;
    s.t = t;
    CoeffVec copy = c;
    s.u = vector_from_coeffs(std::move(grid), std::move(copy), /*solenoidal=*/true);
    return s;
}

double lp_of_values(const VectorField& u, double p) {
    // local helper; avoids the norms header dependency cycle
    double acc = 0.0;
    const std::size_t sz = u.grid->point_count();
    for (std::size_t i = 0; i < sz; ++i) {
        double s2 = 0.0;
        for (const auto& c : u.comp) s2 += c.values[i] * c.values[i];
        acc += s2 == 0.0 ? 0.0 : std::pow(s2, 0.5 * p);
    }
    return std::pow(acc * u.grid->cell_volume(), 1.0 / p);
}

}  // namespace

NonlinearForm nonlinear_form_from_string(const std::string& s) {
    if (s == "divergence") return NonlinearForm::divergence;
    if (s == "skew_symmetric") return NonlinearForm::skew_symmetric;
    throw std::invalid_argument("unknown nonlinear form: " + s);
}

std::string to_string(NonlinearForm form) {
    return form == NonlinearForm::divergence ? "divergence" : "skew_symmetric";
}

VectorField nonlinear_term(const VectorField& u, NonlinearForm form, bool dealias) {
    Workspace ws(*u.grid);
    CoeffVec c = coeffs_of(u);
    CoeffVec out;
    projected_bilinear(*u.grid, c, c, form, dealias, ws, out);
    return vector_from_coeffs(u.grid, std::move(out), /*solenoidal=*/true);
}

VectorField perturbed_nonlinear(const VectorField& v, const VectorField& w,
                                NonlinearForm form, bool dealias) {
    if (!v.grid->compatible(*w.grid))
        throw std::invalid_argument("perturbed_nonlinear: grid mismatch");
    Workspace ws(*v.grid);
    CoeffVec cv = coeffs_of(v);
    CoeffVec cw = coeffs_of(w);
    CoeffVec cross, self;
    projected_bilinear(*v.grid, cv, cw, form, dealias, ws, cross);
    projected_bilinear(*w.grid, cw, cw, form, dealias, ws, self);
    for (std::size_t d = 0; d < self.size(); ++d)
        for (std::size_t x = 0; x < self[d].size(); ++x)
            self[d][x] += 2.0 * cross[d][x];
    return vector_from_coeffs(v.grid, std::move(self), /*solenoidal=*/true);
}

VectorField velocity_rhs(const VectorField& u, const SolverConfig& config) {
    CoeffVec out = coeffs_of(u);
    const double nu = config.viscosity;
    const double ku2 = u.grid->k_unit() * u.grid->k_unit();
    spectral::for_each_mode(*u.grid, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < u.grid->dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
        const double damp = -nu * ku2 * m2;
        for (auto& comp : out) comp[idx] *= damp;
    });
    if (!config.stokes_only) {
        VectorField n = nonlinear_term(u, config.nonlinear_form, config.dealias);
        for (std::size_t d = 0; d < out.size(); ++d)
            for (std::size_t x = 0; x < out[d].size(); ++x) out[d][x] -= n.comp[d].coeffs[x];
    }
    return vector_from_coeffs(u.grid, std::move(out), u.solenoidal);
}

double advise_dt(const VectorField& u, const SolverConfig& config) {
    const double umax = max_speed(u);
    if (umax == 0.0) return std::numeric_limits<double>::infinity();
    return config.cfl_safety * u.grid->spacing() / umax;
}

Snapshot step(const Snapshot& s, const SolverConfig& config) {
    Stepper stepper(s.u.grid, config);
    CoeffVec c = coeffs_of(s.u);
    if (config.dealias)
        for (auto& comp : c) spectral::dealias_mask(*s.u.grid, comp);
    stepper.advance(c, config.dt);
    if (!coeffs_finite(c))
        throw NumericalError("solver: non-finite state after step", s.t + config.dt);
    return materialize(s.u.grid, c, s.t + config.dt);
}

namespace {

/// Shared driver for single and coupled runs.
struct RunPlan {
    long n_steps;
    double dt;
    long snap_stride;
    std::vector<double> extra_times;  // sorted
};

RunPlan plan_run(const SolverConfig& config, double t_start) {
    if (!(config.dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
    if (config.t_end <= t_start)
        throw std::invalid_argument("run: t_end must exceed the start time");
    RunPlan plan;
    const double span = config.t_end - t_start;
    plan.n_steps = std::max<long>(1, std::lround(std::ceil(span / config.dt - 1e-9)));
    plan.dt = config.dt;
    const double si = std::max(config.snapshot_interval, config.dt);
    plan.snap_stride = std::max<long>(1, std::lround(si / config.dt));
    plan.extra_times = config.extra_snapshot_times;
    std::sort(plan.extra_times.begin(), plan.extra_times.end());
    return plan;
}

}  // namespace

Trajectory run(const VectorField& u0, const SolverConfig& config, const StepObserver& observer,
               double t_start) {
    if (!u0.solenoidal)
        throw std::invalid_argument("run: initial field must be solenoidal (project it first)");
    Trajectory traj;
    traj.config = config;

    const RunPlan plan = plan_run(config, t_start);
    GridPtr grid = u0.grid;
    Stepper stepper(grid, config);

    CoeffVec state = coeffs_of(u0);
    if (config.dealias)
        for (auto& c : state) spectral::dealias_mask(*grid, c);
    spectral::leray_project_inplace(*grid, state);

    Snapshot current = materialize(grid, state, t_start);
    const double dt_adv = advise_dt(current.u, config);
    if (config.dt > dt_adv) {
        traj.warnings.push_back("dt " + std::to_string(config.dt) +
                                " exceeds the CFL advisory " + std::to_string(dt_adv));
    }
    const double ceiling =
        config.blowup_ceiling_factor * lp_of_values(current.u, config.blowup_norm_p);

    traj.snapshots.push_back(current);
    if (observer) observer(current);

    std::size_t next_extra = 0;
    while (next_extra < plan.extra_times.size() && plan.extra_times[next_extra] <= t_start)
        ++next_extra;

    for (long i = 1; i <= plan.n_steps; ++i) {
        double t_next = t_start + static_cast<double>(i) * plan.dt;
        double dt_step = plan.dt;
        if (i == plan.n_steps || t_next > config.t_end) {
            t_next = config.t_end;
            dt_step = config.t_end - (t_start + static_cast<double>(i - 1) * plan.dt);
        }
        stepper.advance(state, dt_step);
        if (!coeffs_finite(state))
            throw NumericalError("solver: non-finite state at t = " + std::to_string(t_next),
                                 t_next);
        current = materialize(grid, state, t_next);
        if (observer) observer(current);

        bool want_snapshot = (i % plan.snap_stride == 0) || (i == plan.n_steps);
        if (next_extra < plan.extra_times.size() && t_next >= plan.extra_times[next_extra]) {
            want_snapshot = true;
            while (next_extra < plan.extra_times.size() &&
                   plan.extra_times[next_extra] <= t_next)
                ++next_extra;
        }
        if (want_snapshot) traj.snapshots.push_back(current);

        const double lp_now = lp_of_values(current.u, config.blowup_norm_p);
        if (ceiling > 0.0 && lp_now > ceiling) {
            traj.escaped = true;
            traj.escape_time = t_next;
            if (traj.snapshots.back().t != t_next) traj.snapshots.push_back(current);
            break;
        }
    }
    return traj;
}

std::pair<Trajectory, Trajectory> run_coupled(const VectorField& v0, const VectorField& w0,
                                              const SolverConfig& config,
                                              const CoupledStepObserver& observer) {
    if (!v0.grid->compatible(*w0.grid))
        throw std::invalid_argument("run_coupled: grid mismatch");
    if (!v0.solenoidal || !w0.solenoidal)
        throw std::invalid_argument("run_coupled: initial fields must be solenoidal");

    Trajectory tv, tw;
    tv.config = config;
    tw.config = config;

    const RunPlan plan = plan_run(config, 0.0);
    GridPtr grid = v0.grid;
    Stepper stepper(grid, config);

    CoeffVec v = coeffs_of(v0);
    CoeffVec w = coeffs_of(w0);
    if (config.dealias) {
        for (auto& c : v) spectral::dealias_mask(*grid, c);
        for (auto& c : w) spectral::dealias_mask(*grid, c);
    }
    spectral::leray_project_inplace(*grid, v);
    spectral::leray_project_inplace(*grid, w);

    Snapshot sv = materialize(grid, v, 0.0);
    Snapshot sw = materialize(grid, w, 0.0);
    const double ceiling_v =
        config.blowup_ceiling_factor * std::max(lp_of_values(sv.u, config.blowup_norm_p),
                                                lp_of_values(sw.u, config.blowup_norm_p));
    tv.snapshots.push_back(sv);
    tw.snapshots.push_back(sw);
    if (observer) observer(sv, sw);

    for (long i = 1; i <= plan.n_steps; ++i) {
        double t_next = static_cast<double>(i) * plan.dt;
        double dt_step = plan.dt;
        if (i == plan.n_steps || t_next > config.t_end) {
            t_next = config.t_end;
            dt_step = config.t_end - static_cast<double>(i - 1) * plan.dt;
        }
        stepper.advance_coupled(v, w, dt_step);
        if (!coeffs_finite(v) || !coeffs_finite(w))
            throw NumericalError("coupled solver: non-finite state at t = " +
                                     std::to_string(t_next),
                                 t_next);
        sv = materialize(grid, v, t_next);
        sw = materialize(grid, w, t_next);
        if (observer) observer(sv, sw);

        const bool want_snapshot = (i % plan.snap_stride == 0) || (i == plan.n_steps);
        if (want_snapshot) {
            tv.snapshots.push_back(sv);
            tw.snapshots.push_back(sw);
        }
        const double lp_now = std::max(lp_of_values(sv.u, config.blowup_norm_p),
                                       lp_of_values(sw.u, config.blowup_norm_p));
        if (ceiling_v > 0.0 && lp_now > ceiling_v) {
            tv.escaped = tw.escaped = true;
            tv.escape_time = tw.escape_time = t_next;
            if (tv.snapshots.back().t != t_next) {
                tv.snapshots.push_back(sv);
                tw.snapshots.push_back(sw);
            }
            break;
        }
    }
    return {std::move(tv), std::move(tw)};
}

}  // namespace nsap
