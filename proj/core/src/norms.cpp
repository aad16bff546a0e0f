#include "nsap/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "nsap/operators.hpp"

namespace nsap {

namespace {

double speed_squared(const VectorField& u, std::size_t i) {
    double s2 = 0.0;
    for (const auto& c : u.comp) {
        const double v = c.values[i];
        s2 += v * v;
    }
    return s2;
}

/// |u|^q from s2 = |u|^2. Integer and half-integer q/2 take the cheap
/// multiply/sqrt path; anything else falls back to pow.
class MagnitudePower {
  public:
    explicit MagnitudePower(double q) {
        const double half = 0.5 * q;
        const double r = std::round(half);
        if (r == half && r >= 0 && r < 64) {
            int_part_ = static_cast<int>(r);
            mode_ = Mode::integer;
        } else if (std::round(half - 0.5) == half - 0.5 && half >= 0.5 && half < 64) {
            int_part_ = static_cast<int>(half - 0.5);
            mode_ = Mode::half;
        } else {
            exponent_ = half;
            mode_ = Mode::general;
        }
    }

    double operator()(double s2) const {
        switch (mode_) {
            case Mode::integer:
                return ipow(s2, int_part_);
            case Mode::half:
                return ipow(s2, int_part_) * std::sqrt(s2);
            case Mode::general:
                return s2 == 0.0 ? 0.0 : std::pow(s2, exponent_);
        }
        return 0.0;
    }

  private:
    enum class Mode { integer, half, general };
    static double ipow(double x, int e) {
        double acc = 1.0;
        double base = x;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    Mode mode_ = Mode::general;
    int int_part_ = 0;
    double exponent_ = 0.0;
};

}  // namespace

double lp_norm(const VectorField& u, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("lp_norm: q must be >= 1");
    const std::size_t sz = u.grid->point_count();
    if (q == kInfinityNorm) {
        double best = 0.0;
        for (std::size_t i = 0; i < sz; ++i) best = std::max(best, speed_squared(u, i));
        return std::sqrt(best);
    }
    CompensatedSum acc;
    const MagnitudePower mag_q(q);
    for (std::size_t i = 0; i < sz; ++i) acc.add(mag_q(speed_squared(u, i)));
    return std::pow(acc.value() * u.grid->cell_volume(), 1.0 / q);
}

double lp_norm(const ScalarField& f, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("lp_norm: q must be >= 1");
    const std::size_t sz = f.grid->point_count();
    if (q == kInfinityNorm) {
        double best = 0.0;
        for (std::size_t i = 0; i < sz; ++i) best = std::max(best, std::abs(f.values[i]));
        return best;
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < sz; ++i) acc.add(std::pow(std::abs(f.values[i]), q));
    return std::pow(acc.value() * f.grid->cell_volume(), 1.0 / q);
}

double l2_norm_spectral(const VectorField& u) {
    CompensatedSum acc;
    for (const auto& c : u.comp)
        for (const auto& z : c.coeffs) acc.add(std::norm(z));
    return std::sqrt(acc.value() * u.grid->volume());
}

double dissipation(const VectorField& u, const TensorField& grad, double p) {
    if (!(p >= 2.0)) throw std::invalid_argument("dissipation: p must be >= 2");
    const Grid& g = *u.grid;
    const std::size_t sz = g.point_count();
    const int dim = g.dim();
    CompensatedSum acc;
    const MagnitudePower mag(p - 2.0);
    for (std::size_t x = 0; x < sz; ++x) {
        double g2 = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const double d = grad.at(i, j).values[x];
                g2 += d * d;
            }
        acc.add(p == 2.0 ? g2 : mag(speed_squared(u, x)) * g2);
    }
    return acc.value() * g.cell_volume();
}

double dissipation(const VectorField& u, double p) {
    if (p == 2.0) return grad_l2_squared(u);
    return dissipation(u, gradient(u), p);
}

double grad_l2_squared(const VectorField& u) {
    // Parseval: integral |grad u|^2 = L^N sum_k |k|^2 |uhat|^2.
    const Grid& g = *u.grid;
    const double ku2 = g.k_unit() * g.k_unit();
    CompensatedSum acc;
    spectral::for_each_mode(g, [&](std::size_t idx, const int* m) {
        double m2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) m2 += static_cast<double>(m[d]) * m[d];
        if (m2 == 0.0) return;
        double c2 = 0.0;
        for (const auto& c : u.comp) c2 += std::norm(c.coeffs[idx]);
        acc.add(m2 * c2);
    });
    return ku2 * acc.value() * g.volume();
}

double tail_mass(const VectorField& u, double margin) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double L = g.box_length();
    const double edge = 0.5 * margin * L;
    std::vector<bool> outer_1d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = g.coord(i);
        outer_1d[static_cast<std::size_t>(i)] = (x < edge) || (L - x <= edge);
    }
    CompensatedSum total, outer;
    auto accumulate = [&](std::size_t idx, bool is_outer) {
        const double s2 = speed_squared(u, idx);
        total.add(s2);
        if (is_outer) outer.add(s2);
    };
    if (g.dim() == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx)
                accumulate(idx, outer_1d[static_cast<std::size_t>(i)] ||
                                    outer_1d[static_cast<std::size_t>(j)]);
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx)
                    accumulate(idx, outer_1d[static_cast<std::size_t>(i)] ||
                                        outer_1d[static_cast<std::size_t>(j)] ||
                                        outer_1d[static_cast<std::size_t>(k)]);
    }
    const double t = total.value();
    return t == 0.0 ? 0.0 : outer.value() / t;
}

KappaValue kappa_from_norms(double lp, double l2, double p, int dim) {
    if (!(p > dim)) throw std::invalid_argument("kappa: requires p > N");
    const double theta = p * (dim - 2.0) / (dim * (p - 2.0));
    KappaValue k;
    k.p = p;
    k.value = std::pow(lp, theta) * std::pow(l2, 1.0 - theta);
    return k;
}

KappaValue kappa(const VectorField& u, double p, int dim) {
    return kappa_from_norms(lp_norm(u, p), lp_norm(u, 2.0), p, dim);
}

double kappa_cubed_identity(double lp, double l2, double p) {
    return std::pow(l2, 2.0 * (p - 3.0) / (p - 2.0)) * std::pow(lp, p / (p - 2.0));
}

ExponentTable exponent_table(double p, int dim) {
    if (!(p > dim)) throw std::invalid_argument("exponent_table: requires p > N");
    ExponentTable t;
    t.dim = dim;
    t.p = p;
    t.alpha = p * (p - dim + 2.0) / (p - dim);
    const double pr = std::round(p);
    if (pr == p && std::abs(p) < 1e6) {
        const long long pi = static_cast<long long>(pr);
        long long num = pi * (pi - dim + 2);
        long long den = pi - dim;
        // reduce
        auto gcd = [](long long a, long long b) {
            while (b) {
                const long long r = a % b;
                a = b;
                b = r;
            }
            return a < 0 ? -a : a;
        };
        const long long g = gcd(num, den);
        t.alpha_num = num / g;
        t.alpha_den = den / g;
    }
    t.theta = p * (dim - 2.0) / (dim * (p - 2.0));
    t.sobolev_q = 2.0;
    t.sobolev_r = dim == 2 ? kInfinityNorm : 2.0 * dim / (dim - 2.0);
    return t;
}

IbpTerms ibp_terms(const VectorField& u, const TensorField& grad, const VectorField& lap,
                   double p) {
    if (!(p >= 2.0)) throw std::invalid_argument("ibp_terms: p must be >= 2");
    const Grid& g = *u.grid;
    const std::size_t sz = g.point_count();
    const int dim = g.dim();
    CompensatedSum lhs_acc, cross_acc;
    const MagnitudePower mag(p - 2.0);
    for (std::size_t x = 0; x < sz; ++x) {
        const double s2 = speed_squared(u, x);
        // -lap u . |u|^{p-2} u
        double lu = 0.0;
        for (int c = 0; c < dim; ++c)
            lu += lap.comp[static_cast<std::size_t>(c)].values[x] *
                  u.comp[static_cast<std::size_t>(c)].values[x];
        const double w = (p == 2.0) ? 1.0 : mag(s2);
        lhs_acc.add(-lu * w);
        // |u|^{p-4} sum_j (sum_k u_k d_j u_k)^2; a vanishing |u| kills the
        // whole term since the inner sums vanish at least linearly with |u|.
        if (s2 > 0.0) {
            double sum_j = 0.0;
            for (int j = 0; j < dim; ++j) {
                double gj = 0.0;
                for (int k = 0; k < dim; ++k)
                    gj += u.comp[static_cast<std::size_t>(k)].values[x] * grad.at(j, k).values[x];
                sum_j += gj * gj;
            }
            const double w4 = (p == 4.0) ? 1.0 : std::pow(s2, 0.5 * (p - 4.0));
            cross_acc.add(w4 * sum_j);
        }
    }
    const double cv = g.cell_volume();
    return IbpTerms{lhs_acc.value() * cv, cross_acc.value() * cv};
}

IbpTerms ibp_terms(const VectorField& u, double p) {
    return ibp_terms(u, gradient(u), laplacian(u), p);
}

double weighted_inner(const VectorField& f, const VectorField& u, double p) {
    if (!(p >= 2.0)) throw std::invalid_argument("weighted_inner: p must be >= 2");
    const Grid& g = *u.grid;
    const std::size_t sz = g.point_count();
    const int dim = g.dim();
    CompensatedSum acc;
    const MagnitudePower mag(p - 2.0);
    for (std::size_t x = 0; x < sz; ++x) {
        double dot = 0.0;
        for (int c = 0; c < dim; ++c)
            dot += f.comp[static_cast<std::size_t>(c)].values[x] *
                   u.comp[static_cast<std::size_t>(c)].values[x];
        const double w = (p == 2.0) ? 1.0 : mag(speed_squared(u, x));
        acc.add(dot * w);
    }
    return acc.value() * g.cell_volume();
}

}  // namespace nsap
