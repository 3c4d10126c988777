#include "gns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gns/special.hpp"

namespace gns {

namespace {

// Symmetric tridiagonal QL with implicit shifts. diag/subdiag are destroyed;
// z carries the first row of the accumulated rotations (init e_0 outside).
// On return diag holds the eigenvalues, unsorted.
void ql_first_row(std::vector<double>& diag, std::vector<double>& sub, std::vector<double>& z) {
    const int n = static_cast<int>(diag.size());
    sub.resize(n, 0.0);  // sub[n-1] used as workspace
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::abs(diag[mm]) + std::abs(diag[mm + 1]);
                if (std::abs(sub[mm]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (mm != l) {
                if (++iter == 64)
                    throw std::runtime_error("jacobi_rule: eigenvalue iteration stalled");
                double g = (diag[l + 1] - diag[l]) / (2.0 * sub[l]);
                double r = std::hypot(g, 1.0);
                g = diag[mm] - diag[l] + sub[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = mm - 1; i >= l; --i) {
                    double f = s * sub[i];
                    const double b = c * sub[i];
                    r = std::hypot(f, g);
                    sub[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        sub[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                diag[l] -= p;
                sub[l] = g;
                sub[mm] = 0.0;
            }
        } while (mm != l);
    }
}

}  // namespace

GaussRule jacobi_rule(int points, double alpha, double beta) {
    if (points < 1) throw std::invalid_argument("jacobi_rule: need at least one point");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::invalid_argument("jacobi_rule: exponents must exceed -1");
    const double apb = alpha + beta;
    std::vector<double> diag(points), sub(points, 0.0), z(points, 0.0);
    diag[0] = (beta - alpha) / (apb + 2.0);
    for (int k = 1; k < points; ++k) {
        const double d = 2.0 * k + apb;
        diag[k] = (beta * beta - alpha * alpha) / (d * (d + 2.0));
        const double bk = 4.0 * k * (k + alpha) * (k + beta) * (k + apb) /
                          (d * d * (d + 1.0) * (d - 1.0));
        sub[k - 1] = std::sqrt(bk);
    }
    // total mass of the weight on [-1,1]
    const double mass = std::pow(2.0, apb + 1.0) * beta_fn(alpha + 1.0, beta + 1.0);
    z[0] = 1.0;
    ql_first_row(diag, sub, z);

    std::vector<int> order(points);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });

    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < points; ++i) {
        rule.nodes[i] = diag[order[i]];
        rule.weights[i] = mass * z[order[i]] * z[order[i]];
    }
    return rule;
}

Grid1D half_line_rule(double weight_exp, int points_per_segment) {
    if (points_per_segment < 4)
        throw std::invalid_argument("half_line_rule: resolution too small");
    Grid1D grid;
    grid.weight_exp = weight_exp;
    grid.nodes.reserve(2 * points_per_segment);
    grid.weights.reserve(2 * points_per_segment);

    // [0,1]: x = (s+1)/2 with the Jacobi weight (1+s)^weight_exp, so that
    // int_0^1 f(x) x^w dx = 2^{-(w+1)} sum w_i f(x_i).
    const GaussRule head = jacobi_rule(points_per_segment, 0.0, weight_exp);
    const double head_scale = std::pow(2.0, -(weight_exp + 1.0));
    for (int i = 0; i < points_per_segment; ++i) {
        grid.nodes.push_back(0.5 * (head.nodes[i] + 1.0));
        grid.weights.push_back(head_scale * head.weights[i]);
    }

    // [1,inf): x = 1/sigma, int_1^inf f(x) x^w dx = int_0^1 f(1/s) s^{-w-2} ds.
    const GaussRule tail = jacobi_rule(points_per_segment, 0.0, 0.0);
    for (int i = points_per_segment - 1; i >= 0; --i) {
        const double sigma = 0.5 * (tail.nodes[i] + 1.0);
        grid.nodes.push_back(1.0 / sigma);
        grid.weights.push_back(0.5 * tail.weights[i] * std::pow(sigma, -weight_exp - 2.0));
    }
    return grid;
}

Grid1D finite_rule(double weight_exp, double a, double b, int points) {
    if (!(b > a) || !(a >= 0.0)) throw std::invalid_argument("finite_rule: bad segment");
    Grid1D grid;
    grid.weight_exp = weight_exp;
    const GaussRule base = jacobi_rule(points, 0.0, 0.0);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < points; ++i) {
        const double x = a + half * (base.nodes[i] + 1.0);
        grid.nodes.push_back(x);
        grid.weights.push_back(half * base.weights[i] * std::pow(x, weight_exp));
    }
    return grid;
}

QuadratureGrid build_grid(const ParamSet& p, int resolution) {
    if (resolution < 8) throw std::invalid_argument("build_grid: resolution must be >= 8");
    QuadratureGrid g;
    g.radial = half_line_rule(static_cast<double>(p.n - 1), resolution);
    g.height = half_line_rule(p.m - 1.0, resolution);
    const double wn = sphere_area(static_cast<double>(p.n));
    const double wm = sphere_area(p.m);
    for (double& w : g.radial.weights) w *= wn;
    for (double& w : g.height.weights) w *= wm;
    g.domain_split = {1.0};
    g.resolution = resolution;
    return g;
}

namespace {

void require_radial_convergence(double integrand_decay, const ParamSet& p, const char* who) {
    // tail of the r-integral needs integrand decay beyond the measure growth
    if (!(integrand_decay > p.n))
        throw std::domain_error(std::string(who) +
                                ": declared decay too slow, weighted integral diverges");
}

void require_cyl_convergence(double integrand_decay, const ParamSet& p, const char* who) {
    if (!(integrand_decay > p.m + p.n))
        throw std::domain_error(std::string(who) +
                                ": declared decay too slow, weighted integral diverges");
}

}  // namespace

double lp_norm(const RadialProfile& u, double p_exp, const ParamSet& p, const QuadratureGrid& g) {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
    require_radial_convergence(p_exp * u.decay_exponent, p, "lp_norm");
    const double acc =
        g.radial.integrate([&](double r) { return std::pow(std::abs(u.eval(r)), p_exp); });
    return std::pow(acc, 1.0 / p_exp);
}

double lp_norm(const CylField& f, double p_exp, const ParamSet& p, const QuadratureGrid& g) {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
    require_cyl_convergence(p_exp * f.decay_exponent, p, "lp_norm");
    double acc = 0.0;
    for_each_cyl_point(g, [&](double r, double rho, double w) {
        acc += w * std::pow(std::abs(f.eval(r, rho)), p_exp);
    });
    return std::pow(acc, 1.0 / p_exp);
}

double h1_seminorm(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g) {
    require_radial_convergence(2.0 * (u.decay_exponent + 1.0), p, "h1_seminorm");
    const double acc = g.radial.integrate([&](double r) {
        const double d = u.deriv(r);
        return d * d;
    });
    return std::sqrt(acc);
}

double h1_seminorm(const CylField& f, const ParamSet& p, const QuadratureGrid& g) {
    require_cyl_convergence(2.0 * (f.decay_exponent + 1.0), p, "h1_seminorm");
    double acc = 0.0;
    for_each_cyl_point(g, [&](double r, double rho, double w) {
        const double dr = f.d_r(r, rho);
        const double dh = f.d_rho(r, rho);
        acc += w * (dr * dr + dh * dh);
    });
    return std::sqrt(acc);
}

double h1_inner(const CylField& a, const CylField& b, const ParamSet& p, const QuadratureGrid& g) {
    require_cyl_convergence(a.decay_exponent + b.decay_exponent + 2.0, p, "h1_inner");
    double acc = 0.0;
    for_each_cyl_point(g, [&](double r, double rho, double w) {
        acc += w * (a.d_r(r, rho) * b.d_r(r, rho) + a.d_rho(r, rho) * b.d_rho(r, rho));
    });
    return acc;
}

}  // namespace gns
