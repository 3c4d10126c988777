#pragma once

#include "gns/params.hpp"
#include "gns/profiles.hpp"
#include "gns/quadrature.hpp"

namespace gns {

// Both deficits of one profile plus the residual of the exact identity
// linking them, c1^{-1} * sobolev_deficit = gn_deficit.
struct DeficitReport {
    double gn_deficit = 0.0;
    double sobolev_deficit = 0.0;
    double c1 = 0.0;
    double identity_residual = 0.0;
};

// GN-side extremal profile lambda^{n/2t} (1 + lambda^2 r^2)^{-1/(t-1)},
// centered at the origin.
RadialProfile gn_extremal(const ParamSet& p, double lambda);

// Sobolev-side extremal z s^gamma (1 + s^2 r^2 + s^2 rho^2)^{-gamma}.
CylField sobolev_extremal(const ParamSet& p, double s, double z);

// Sharp constants evaluated by quadrature of the extremal's norms.
double sharp_gn_constant(const ParamSet& p, const QuadratureGrid& g);
double sharp_sobolev_constant(const ParamSet& p, const QuadratureGrid& g);

// A^{4t/2*} ||grad u||^{mu 4t/2*} ||u||_{t+1}^{(1-mu) 4t/2*} - ||u||_{2t}^{4t/2*}.
double gn_deficit(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g);

// S^2 ||phi||_{H1}^2 - ||phi||_{2*}^2.
double sobolev_deficit(const CylField& phi, const ParamSet& p, const QuadratureGrid& g);

// Lifting map u -> [u^{-(t-1)}(r) + rho^2]^{-gamma} with partials assembled by
// the chain rule. The returned field raises a domain error if evaluated where
// u <= 0 (perturbations must keep the profile strictly positive).
CylField lift(const RadialProfile& u, const ParamSet& p);

// Constant linking the lifted deficit to the GN deficit,
// ( int (1+theta^2)^{-(m+n)} omega_m theta^{m-1} dtheta )^{2/2*}, closed form.
double deficit_link_constant(const ParamSet& p);

// lambda^{n/2t} u(lambda r); preserves ||u||_{2t} and the GN deficit.
RadialProfile gn_rescale(const RadialProfile& u, double lambda, const ParamSet& p);

// Rescales so that ||u||_{t+1}^{t+1} / ||grad u||_2^2 matches the extremal's.
RadialProfile normalize_ratio(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g);

// Scales so that ||u||_{2t} matches the extremal's.
RadialProfile normalize_mass(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g);

// Evaluates both deficits and the identity residual. Requires the ratio
// normalization (call normalize_ratio first).
DeficitReport deficit_identity(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g);

}  // namespace gns
