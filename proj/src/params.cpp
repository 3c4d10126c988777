#include "gns/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gns/special.hpp"

namespace gns {

double sphere_area(double m) {
    if (!(m > 0.0)) throw std::domain_error("sphere_area: dimension must be positive");
    return 2.0 * std::pow(M_PI, 0.5 * m) / gamma_fn(0.5 * m);
}

ParamSet derive_params(int n, double t) {
    if (n < 2) throw std::domain_error("derive_params: n must be >= 2");
    if (!(t > 1.0)) throw std::domain_error("derive_params: t must exceed 1");
    const double m = 4.0 * t / (t - 1.0) - 2.0 * n;
    if (!(m > 0.0))
        throw std::domain_error(
            "derive_params: t at or beyond the admissible endpoint (auxiliary dimension m = " +
            std::to_string(m) + " <= 0)");
    ParamSet p;
    p.n = n;
    p.m = m;
    p.t = t;
    p.two_star = 2.0 * (m + n) / (m + n - 2.0);
    p.gamma = 0.5 * (m + n - 2.0);
    p.mu = n * (t - 1.0) / (t * (2.0 * n - (t + 1.0) * (n - 2.0)));
    if (!(p.mu > 0.0 && p.mu < 1.0))
        throw std::domain_error("derive_params: interpolation weight out of (0,1)");
    return p;
}

double beta_moment(double a, double b) {
    if (!(a > 0.0)) throw std::domain_error("beta_moment: need a > 0");
    if (!(b > 0.5 * a)) throw std::domain_error("beta_moment: divergent, need b > a/2");
    return 0.5 * beta_fn(0.5 * a, b - 0.5 * a);
}

double exponent_identity_residual(const ParamSet& p) {
    const double lhs = (1.0 - p.mu) * 4.0 * p.t / (p.two_star * (p.t + 1.0));
    const double rhs = 1.0 - p.mu * 2.0 * p.t / p.two_star;
    return std::abs(lhs - rhs);
}

}  // namespace gns
