#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "nsap/norms.hpp"
#include "nsap/solver.hpp"

namespace nsap {

struct MonitorConfig {
    std::vector<int> p_set{4, 6, 9};  // first entry is the primary p
    int diag_stride = 1;              // record every k-th step
    bool balance_terms = true;        // integration-by-parts and d/dt quadratures
    double tail_fraction = 0.1;       // outer-box fraction for tail_mass
    double viscosity = 1.0;
    NonlinearForm form = NonlinearForm::skew_symmetric;
    bool dealias = true;
    bool stokes_only = false;  // mirror of the solver flag so rhs quadratures match
};

/// Every norm and functional the estimates consume, at one instant.
struct PerPDiagnostics {
    int p = 0;
    double lp = 0;         // ||u||_p
    double lsob = 0;       // ||u||_{3p} (N=3) or the 2D embedding companion ||u||_{2p}
    double dp = 0;         // D_p = integral |u|^{p-2} |grad u|^2
    double ibp_lhs = 0;    // -integral lap u . |u|^{p-2} u
    double ibp_cross = 0;  // integral |u|^{p-4} sum_j (sum_k u_k d_j u_k)^2
    double rhs_dot = 0;    // integral d_t u . |u|^{p-2} u  (equation right-hand side)
};

struct DiagnosticRecord {
    double t = 0;
    double l2 = 0, l3 = 0, l6 = 0, l9 = 0, linf = 0;
    double grad_l2_sq = 0;   // ||grad u||_2^2 = D_2
    double tail_mass = 0;    // energy fraction near the box boundary
    double spectral_tail = 0;  // energy fraction in the outermost retained shells
    std::vector<PerPDiagnostics> per_p;

    const PerPDiagnostics& at_p(int p) const;
};

DiagnosticRecord compute_record(const Snapshot& snap, const MonitorConfig& cfg);

struct DiagnosticSeries {
    std::vector<int> p_set;
    bool has_balance = true;
    int dim = 3;
    bool escaped = false;
    std::vector<DiagnosticRecord> rows;

    int primary_p() const { return p_set.empty() ? 4 : p_set.front(); }
    std::vector<double> times() const;
    std::vector<double> column(const std::function<double(const DiagnosticRecord&)>& get) const;
};

/// Collects records along a run at the configured stride (plus the final
/// step). Wire `observer()` into run()/run_coupled().
class SeriesCollector {
  public:
    SeriesCollector(const MonitorConfig& cfg, int dim);
    StepObserver observer();
    void ingest(const Snapshot& snap);
    DiagnosticSeries take();
    const DiagnosticSeries& peek() const { return series_; }

  private:
    MonitorConfig cfg_;
    DiagnosticSeries series_;
    long count_ = 0;
};

enum class Verdict { holds_with_c, violated, inconclusive };
std::string to_string(Verdict v);

struct InequalityReport {
    std::string id;
    std::string description;
    int dim = 3;
    double p = 0;
    std::vector<double> t, lhs, rhs;
    double c_emp = 0;       // sup over samples of lhs/rhs (or the fitted constant)
    double tolerance = 0;   // slack used by the verdict
    Verdict verdict = Verdict::inconclusive;
    std::map<std::string, double> aux;
    std::vector<std::string> notes;
};

/// Norms of the initial datum that the integral estimates reference.
struct InitialNorms {
    double l2 = 0, l3 = 0, lp = 0, lsob = 0, linf = 0;
    double kappa_p = 0;
    double p = 0;
};
InitialNorms initial_norms(const VectorField& u0, double p);

/// ---- single-inequality checks -------------------------------------------

/// Energy inequality: ||u(t)||_2^2 + 2 nu int_{t0}^t ||grad u||_2^2 <=
/// ||u(t0)||_2^2 (1 + tol) for every sampled pair t0 < t. The dissipation
/// integral uses a 4th-order cumulative rule so the slack reflects the
/// integrator, not the quadrature.
InequalityReport check_energy(const DiagnosticSeries& s, double viscosity, double tol = 1e-6);

/// Sobolev-type bound ||u||_{3p}^p <= C D_p(u) (N = 3); at N = 2 the
/// companion Gagliardo-Nirenberg form ||u||_{2p}^p <= C ||u||_p^{p/2} D_p^{1/2}.
InequalityReport check_sobolev(const DiagnosticSeries& s, int p);
InequalityReport check_sobolev_field(const VectorField& u, int p);

/// The L^p balance bundle: the time-derivative route identity, the
/// integration-by-parts identity, and the dissipation inequality.
std::vector<InequalityReport> check_lp_balance(const DiagnosticSeries& s, int p);

/// ODE-type bound d/dt ||u||_p^p / p + D_p/2 <= C ||u||_p^alpha with
/// alpha = p(p-N+2)/(p-N).
InequalityReport check_ode_bound(const DiagnosticSeries& s, int p);

/// Per-norm monotonicity with the configured per-sample slack.
InequalityReport check_monotone(const DiagnosticSeries& s, const std::vector<double>& qs,
                                double slack = 1e-8);

/// Amplitude bisection locating the largest monotone amplitude within a
/// factor-of-two bracket. The runner maps an amplitude to its diagnostic
/// series; l3_of_amp reports ||u0||_3 at that amplitude.
struct ThresholdResult {
    double amp_monotone = 0;      // largest amplitude observed monotone
    double amp_violating = 0;     // smallest amplitude observed non-monotone
    double eps_monotone = 0;      // ||u0||_3 at amp_monotone
    double eps_violating = 0;
    int runs = 0;
    bool bracketed = false;
};
ThresholdResult find_monotone_threshold(
    const std::function<DiagnosticSeries(double)>& runner,
    const std::function<double(double)>& l3_of_amp, double amp_lo, double amp_hi,
    const std::vector<double>& qs, double slack = 1e-8, int max_runs = 24);

/// Integral estimate bundle: the (1.4)-type bound, its small-data form, the
/// dissipation/Sobolev time integrals, and the interpolation chain. Requires
/// the run to have decayed (||u||_p below decay_factor of its start);
/// infinite-horizon integrals are truncated and completed with an analytic
/// pure-diffusion tail computed from the final record.
std::vector<InequalityReport> check_integral_bounds(const DiagnosticSeries& s, int p,
                                                    const InitialNorms& init,
                                                    double viscosity, double box_length,
                                                    double decay_factor = 1e-3);

/// Perturbation estimate bundle over a coupled run: the critical-norm bound
/// on w, the energy and L^p balances against the advertised right-hand
/// sides, the time-integral bound, and the pointwise interpolation.
std::vector<InequalityReport> check_perturbation(const DiagnosticSeries& v,
                                                 const DiagnosticSeries& w, int p,
                                                 const InitialNorms& v0,
                                                 const InitialNorms& w0);

/// ---- scaling and stability ------------------------------------------------

/// u -> lambda u(lambda x) realized exactly by shrinking the box to
/// L/lambda and scaling the samples; lambda must be a power of two.
VectorField rescale_field(const VectorField& u, int lambda);

struct ScalingReport {
    int lambda = 1;
    double kappa_rel_delta = 0;
    double l3_rel_delta = 0;
    double l2_expected_factor = 0;  // lambda^{1 - N/2}
    double l2_rel_delta = 0;        // deviation from the expected factor
    bool pass = false;
};
ScalingReport scaling_test(const VectorField& u0, int lambda, double p, double tol = 1e-10);

/// Empirical continuity probe: reruns the coupled system with a shrinking
/// perturbation family 2^{-k} w0 and reports how the (1.4)-type integral of
/// v + w approaches the unperturbed value. Descriptive output only.
struct StabilityProbeReport {
    double base_integral = 0;
    std::vector<double> scales;      // 2^{-k}
    std::vector<double> integrals;   // per member
    std::vector<double> deltas;      // |I_k - base|
    bool deltas_decreasing = false;
    bool outside_regime = false;
    std::vector<std::string> notes;
};
StabilityProbeReport stability_probe(const VectorField& v0, const VectorField& w0,
                                     int shrink_count, const SolverConfig& solver_cfg,
                                     const MonitorConfig& monitor_cfg, int p);

/// 4th-order cumulative integral of samples on a (mostly) uniform time grid;
/// falls back to trapezoid on irregular intervals.
std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& f);

}  // namespace nsap
