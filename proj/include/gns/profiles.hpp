#pragma once

#include <functional>

namespace gns {

// Nonnegative radial function on R^n, r = |x|, with analytic derivative.
// decay_exponent d asserts u(r) = O(r^-d); norm evaluation trusts it when
// screening for divergent integrals.
struct RadialProfile {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    double decay_exponent = 0.0;
};

// Cylindrically symmetric function of (r, rho) on R^n x [0,inf) with analytic
// partials. decay_exponent d asserts phi = O((r + rho)^-d).
struct CylField {
    std::function<double(double, double)> eval;
    std::function<double(double, double)> d_r;
    std::function<double(double, double)> d_rho;
    double decay_exponent = 0.0;
};

// ca*a + cb*b, derivatives combined linearly, decay = slower of the two.
RadialProfile combine(double ca, const RadialProfile& a, double cb, const RadialProfile& b);
CylField combine(double ca, const CylField& a, double cb, const CylField& b);

// c*f.
RadialProfile scaled(const RadialProfile& f, double c);
CylField scaled(const CylField& f, double c);

}  // namespace gns
