#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsap/field.hpp"

namespace nsap {

enum class NonlinearForm {
    divergence,      // P div(u (x) u), the literal projected form
    skew_symmetric,  // P [ div(u (x) u) + (u . grad) u ] / 2, energy-neutral
};

NonlinearForm nonlinear_form_from_string(const std::string& s);
std::string to_string(NonlinearForm form);

struct SolverConfig {
    double viscosity = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;
    double snapshot_interval = 0.1;
    NonlinearForm nonlinear_form = NonlinearForm::skew_symmetric;
    bool dealias = true;
    bool stokes_only = false;            // drop the nonlinearity (diagnostic runs)
    double cfl_safety = 0.5;             // advisor constant C_cfl
    double blowup_ceiling_factor = 1e6;  // ceiling = factor * ||u0||_p
    double blowup_norm_p = 4.0;
    std::vector<double> extra_snapshot_times;  // e.g. log-spaced sampling
};

struct Snapshot {
    double t = 0.0;
    VectorField u;
};

struct Trajectory {
    SolverConfig config;
    std::string scenario_id;
    std::vector<Snapshot> snapshots;  // strictly increasing t, first is the IC
    bool escaped = false;
    double escape_time = 0.0;
    std::vector<std::string> warnings;
};

/// Thrown when a step produces non-finite data.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double t() const { return t_; }

  private:
    double t_;
};

/// P div(u (x) u) (or its skew-symmetrized variant), 2/3-dealiased when
/// `dealias` is set. This is the term that enters the momentum equation with
/// a plus sign on the left, i.e. d/dt u = lap u - nonlinear_term(u).
VectorField nonlinear_term(const VectorField& u,
                           NonlinearForm form = NonlinearForm::divergence,
                           bool dealias = true);

/// P [ 2 div(v (x)_s w) + div(w (x) w) ], the perturbation-equation
/// counterpart, satisfying nonlinear_term(v+w) = nonlinear_term(v) +
/// perturbed_nonlinear(v, w) identically.
VectorField perturbed_nonlinear(const VectorField& v, const VectorField& w,
                                NonlinearForm form = NonlinearForm::divergence,
                                bool dealias = true);

/// Semi-discrete right-hand side lap u - N(u) (used by diagnostics).
VectorField velocity_rhs(const VectorField& u, const SolverConfig& config);

/// Advective CFL bound C_cfl * dx / max|u|; infinite for a quiescent field.
double advise_dt(const VectorField& u, const SolverConfig& config);

/// One ETD2RK step (exact diffusion, explicit 2nd-order exponential RK for
/// the projected nonlinearity). Convenience wrapper over the run machinery.
Snapshot step(const Snapshot& s, const SolverConfig& config);

/// Invoked after every accepted step with the fresh state.
using StepObserver = std::function<void(const Snapshot&)>;
using CoupledStepObserver = std::function<void(const Snapshot& v, const Snapshot& w)>;

Trajectory run(const VectorField& u0, const SolverConfig& config,
               const StepObserver& observer = {}, double t_start = 0.0);

/// Evolves v under the plain equation and w under the perturbation equation
/// driven by the instantaneous v, advancing both through the same integrator
/// stages so that v + w tracks the direct solution of v0 + w0.
std::pair<Trajectory, Trajectory> run_coupled(const VectorField& v0, const VectorField& w0,
                                              const SolverConfig& config,
                                              const CoupledStepObserver& observer = {});

}  // namespace nsap
