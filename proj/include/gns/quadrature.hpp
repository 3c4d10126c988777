#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gns/params.hpp"
#include "gns/profiles.hpp"

namespace gns {

// Nodes and weights of a Gauss rule on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1,1], built by
// Golub-Welsch from the monic recurrence. alpha, beta > -1.
GaussRule jacobi_rule(int points, double alpha, double beta);

// Composite rule approximating int_0^inf f(x) x^weight_exp dx for integrands
// smooth on (0,inf) with algebraic decay. The weight x^weight_exp is absorbed
// into Gauss-Jacobi nodes on [0,1] (no singular value is ever sampled), and
// the tail is compactified through x = 1/sigma onto (0,1].
struct Grid1D {
    std::vector<double> nodes;
    std::vector<double> weights;  // measure factor x^weight_exp folded in
    double weight_exp = 0.0;

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

Grid1D half_line_rule(double weight_exp, int points_per_segment);

// Plain Gauss-Legendre on [a,b] with the factor x^weight_exp evaluated into
// the weights (for segments away from the origin).
Grid1D finite_rule(double weight_exp, double a, double b, int points);

// Tensor grid realizing omega_n r^{n-1} dr and omega_m rho^{m-1} drho; the
// sphere-area factors are folded into the stored weights.
struct QuadratureGrid {
    Grid1D radial;  // r-axis, measure omega_n r^{n-1} dr
    Grid1D height;  // rho-axis, measure omega_m rho^{m-1} drho
    std::vector<double> domain_split;
    int resolution = 0;
};

QuadratureGrid build_grid(const ParamSet& p, int resolution);

// Visits the 2-D evaluation points (r, rho) with their combined weights.
// The rho-axis is rescaled per radius by s(r) = sqrt(1+r^2), matching the
// natural height scale of every field in play, so the inner rule keeps full
// accuracy out to the far radial tail.
template <class F3>
void for_each_cyl_point(const QuadratureGrid& g, F3&& fn) {
    const double m = g.height.weight_exp + 1.0;
    for (std::size_t i = 0; i < g.radial.nodes.size(); ++i) {
        const double r = g.radial.nodes[i];
        const double s = std::sqrt(1.0 + r * r);
        const double wr = g.radial.weights[i] * std::pow(s, m);
        for (std::size_t j = 0; j < g.height.nodes.size(); ++j)
            fn(r, s * g.height.nodes[j], wr * g.height.weights[j]);
    }
}

// Weighted L^p norms. For a RadialProfile only the r-measure applies.
double lp_norm(const RadialProfile& u, double p_exp, const ParamSet& p, const QuadratureGrid& g);
double lp_norm(const CylField& f, double p_exp, const ParamSet& p, const QuadratureGrid& g);

// || grad u ||_2 for a radial profile (one-variable analogue) and the full
// ( int (|d_rho phi|^2 + |d_r phi|^2) dOmega(rho) omega_n r^{n-1} dr )^{1/2}.
double h1_seminorm(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g);
double h1_seminorm(const CylField& f, const ParamSet& p, const QuadratureGrid& g);

// Homogeneous-Sobolev inner product of two fields.
double h1_inner(const CylField& a, const CylField& b, const ParamSet& p, const QuadratureGrid& g);

}  // namespace gns
