#pragma once

namespace gns {

// Lanczos-class log-gamma, accurate to ~1e-14 relative for x > 0.
double log_gamma(double x);

// Gamma(x) for x > 0.
double gamma_fn(double x);

// Euler beta B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y), x, y > 0.
double beta_fn(double x, double y);

}  // namespace gns
