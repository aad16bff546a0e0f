#pragma once

#include <limits>

#include "nsap/field.hpp"

namespace nsap {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Neumaier compensated accumulator; used for every grid quadrature so the
/// high powers |u|^{3p} stay accurate.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Grid quadrature of |u(x)|^q (Euclidean magnitude pointwise), q-th root;
/// q = infinity gives the pointwise maximum. Requires q >= 1.
double lp_norm(const VectorField& u, double q);
double lp_norm(const ScalarField& f, double q);

/// ||u||_2 via Parseval from the spectral side (cross-check route).
double l2_norm_spectral(const VectorField& u);

/// Weighted dissipation D_p(u) = integral |u|^{p-2} |grad u|^2 dx, p >= 2.
/// The overload taking a precomputed gradient avoids redundant transforms.
double dissipation(const VectorField& u, double p);
double dissipation(const VectorField& u, const TensorField& grad, double p);

/// ||grad u||_2^2 = D_2, computed spectrally (no gradient fields needed).
double grad_l2_squared(const VectorField& u);

/// Fraction of ||u||_2^2 carried by points within `margin`*L/2 of the box
/// boundary on any axis ("outer 10% of the box" for margin = 0.1).
double tail_mass(const VectorField& u, double margin = 0.1);

/// Scale-invariant kappa_p value. For dim = 3,
///   kappa_p(u) = ||u||_p^{p/(3(p-2))} ||u||_2^{2(p-3)/(3(p-2))};
/// the general form is ||u||_p^theta ||u||_2^{1-theta} with
/// theta = p(N-2)/(N(p-2)). Requires p > N.
struct KappaValue {
    double p;
    double value;
};
KappaValue kappa(const VectorField& u, double p, int dim);
KappaValue kappa_from_norms(double lp, double l2, double p, int dim);

/// ||u||_2^{2(p-3)/(p-2)} ||u||_p^{p/(p-2)}, which equals kappa_p(u)^3 when
/// dim = 3 (the algebraic identity used in the (2.12) chain).
double kappa_cubed_identity(double lp, double l2, double p);

/// Exponents attached to a (p, N) pair. alpha = p(p-N+2)/(p-N) (finite only
/// for p > N) is carried both as a double and as an exact rational when p is
/// integral.
struct ExponentTable {
    int dim;
    double p;
    double alpha;
    long long alpha_num = 0;  // exact rational alpha for integer p (den > 0)
    long long alpha_den = 0;
    double theta;       // kappa interpolation exponent p(N-2)/(N(p-2))
    double sobolev_q;   // gradient-side exponent of the embedding (always 2)
    double sobolev_r;   // 2N/(N-2); infinity at N = 2
};
ExponentTable exponent_table(double p, int dim);

/// Both sides of the integration-by-parts identity behind the L^p balance:
///   lhs   = -integral lap(u) . |u|^{p-2} u dx
///   cross = integral |u|^{p-4} sum_j (sum_k u_k d_j u_k)^2 dx
/// so that lhs = D_p + (p-2) cross in exact arithmetic.
struct IbpTerms {
    double lhs;
    double cross;
};
IbpTerms ibp_terms(const VectorField& u, const TensorField& grad, const VectorField& lap,
                   double p);
IbpTerms ibp_terms(const VectorField& u, double p);

/// Quadrature of f . |u|^{p-2} u (used for the d/dt ||u||_p^p route).
double weighted_inner(const VectorField& f, const VectorField& u, double p);

}  // namespace nsap
