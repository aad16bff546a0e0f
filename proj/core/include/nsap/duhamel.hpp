#pragma once

#include "nsap/solver.hpp"

namespace nsap {

/// Heat semigroup e^{t nu lap}: per-mode damping exp(-nu |k|^2 t). Rejects
/// negative t.
VectorField heat_semigroup(const VectorField& u0, double t, double viscosity = 1.0);

struct PicardConfig {
    double t_end = 0.05;
    int time_nodes = 16;    // M intervals (even); nodes are t_j = j t_end / M
    int max_iter = 25;
    double tol = 1e-10;     // sup-in-time L^p distance between sweeps
    double p_norm = 2.0;
    double viscosity = 1.0;
    NonlinearForm form = NonlinearForm::skew_symmetric;
    bool dealias = true;
};

struct PicardResult {
    int iterations = 0;
    bool converged = false;
    double final_distance = 0.0;
    double t_end = 0.0;
    std::vector<double> contraction_ratios;  // d_m / d_{m-1}
    std::vector<Snapshot> nodes;             // M+1 samples including t = 0
};

/// Picard iteration on the Duhamel integral equation
///   u(t) = e^{t lap} u0 - int_0^t e^{(t-s) lap} P div(u (x) u)(s) ds,
/// discretized by composite trapezoid in s with the semigroup factor exact
/// per node. Non-contraction is reported, never thrown.
PicardResult picard_solve(const VectorField& u0, const PicardConfig& config);

/// Halves t_end until picard_solve converges (at most `max_halvings` times).
PicardResult picard_solve_with_halving(const VectorField& u0, PicardConfig config,
                                       int max_halvings = 6);

/// Max over nodes of || u(t_j) - e^{t_j lap} u0 + quadrature(t_j) ||_2,
/// recomputed from the stored nodes; at a fixed point this is bounded by
/// twice the sweep tolerance.
double duhamel_residual(const VectorField& u0, const PicardResult& result,
                        const PicardConfig& config);

struct RateFit {
    double sigma_hat = 0.0;       // fitted decay exponent of log-norm vs -log t
    double sigma_expected = 0.0;  // k + |alpha|/2 + (N/2)(1/p - 1/q)
    double t_min = 0.0;
    double t_max = 0.0;
    int samples = 0;
    double rms_residual = 0.0;
};

/// Least-squares slope of log ||d_t^k d_x^alpha u(t)||_q against -log t over
/// the trajectory's positive-time snapshots. Time derivatives are realized
/// through the equation's right-hand side (k <= 1).
RateFit smoothing_rate_fit(const Trajectory& traj, double q, int time_order,
                           const std::vector<int>& alpha, double p_space);

}  // namespace nsap
