#pragma once

namespace gns {

// Dimension/exponent bundle for one member of the sharp Gagliardo-Nirenberg
// family and its continuous-dimension Sobolev counterpart. Construct through
// derive_params() only; no other code recomputes exponents.
struct ParamSet {
    int n;            // ambient integer dimension, n >= 2
    double m;         // auxiliary continuous dimension, m > 0
    double t;         // GN exponent parameter, 1 < t (< n/(n-2) for n > 2)
    double two_star;  // critical exponent 2(m+n)/(m+n-2)
    double gamma;     // decay exponent (m+n-2)/2
    double mu;        // GN interpolation weight, 0 < mu < 1
};

// Generalized unit (m-1)-sphere area, 2 pi^{m/2} / Gamma(m/2). Needs m > 0.
double sphere_area(double m);

// Builds the full exponent bundle from (n, t). Rejects t <= 1 and the range
// where the auxiliary dimension m = 4t/(t-1) - 2n would be nonpositive.
ParamSet derive_params(int n, double t);

// Closed form of int_0^inf rho^{a-1} (1+rho^2)^{-b} drho = B(a/2, b-a/2)/2.
// Serves as the independent oracle for every one-dimensional weight integral.
// Needs a > 0 and b > a/2.
double beta_moment(double a, double b);

// Residual |(1-mu) 4t / (2*(t+1)) - (1 - mu 2t / 2*)|. Algebraically zero for
// every valid ParamSet; anything above round-off indicates exponent drift.
double exponent_identity_residual(const ParamSet& p);

}  // namespace gns
