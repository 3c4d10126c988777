#pragma once

#include <span>
#include <string>
#include <vector>

#include "gns/functionals.hpp"
#include "gns/manifold.hpp"
#include "gns/params.hpp"
#include "gns/profiles.hpp"
#include "gns/quadrature.hpp"

namespace gns {

// Perturbation shapes (1+r^2)^{-q} - c (1+r^2)^{-q'} with q = 2/(t-1), so
// every norm of v + eps*bump converges and derivatives stay analytic.
// ring vanishes at the origin and peaks on an annulus; core is centered.
enum class BumpShape { ring, core };

RadialProfile bump_profile(const ParamSet& p, BumpShape shape);

const char* bump_name(BumpShape shape);

// Deterministic family of perturbed extremals c*(v + sum eps_i bump_i),
// strictly positive by construction; amplitude rescales every eps.
struct CorpusEntry {
    std::string id;
    RadialProfile u;
};
std::vector<CorpusEntry> perturbed_corpus(const ParamSet& p, int count, unsigned seed,
                                          double amplitude = 1.0);

// Ordinary least squares on (log x, log y).
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    int points_used = 0;
};
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Deficit-vs-distance sweep along u_eps = normalize_mass(v + eps*bump).
struct ProbeResult {
    std::vector<double> epsilons;
    std::vector<double> deficits;
    std::vector<double> l1_distances;
    double fitted_slope = 0.0;
    double fit_residual = 0.0;
    double observed_bound_constant = 0.0;  // max of l1_distance / sqrt(deficit)
    bool noise_floor = false;              // deficits stopped decreasing with eps
};
ProbeResult stability_probe(const ParamSet& p, BumpShape shape, std::span<const double> epsilons,
                            const QuadratureGrid& g);

// Ratio sobolev_deficit / (d^beta ||phi||_{H1}^{2-beta}) along F + eps*eta for
// a generic non-tangent eta; beta <= 2.
std::vector<double> sharpness_probe(const ParamSet& p, double beta,
                                    std::span<const double> epsilons, const QuadratureGrid& g);

// One verified inequality instance: rhs - lhs must be >= 0 whenever the
// hypothesis held.
struct BoundCheckRecord {
    ParamSet params;
    std::string input_id;
    bool hypothesis_ok = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

// Three-term cap that delta^{1/2} must stay under for the proximity bound.
double proximity_delta_cap(const ParamSet& p, const QuadratureGrid& g);

// Constant of the proximity bound ||phi - F_{1,0}||_{2*} <= C delta^{1/2}.
double proximity_constant(const ParamSet& p, const QuadratureGrid& g);

// For lifted, mass-normalized corpus fields within delta^{1/2} of the
// manifold in the critical norm, checks the snap-to-F_{1,0} bound.
std::vector<BoundCheckRecord> check_proximity_bound(const ParamSet& p,
                                                    std::span<const CorpusEntry> corpus,
                                                    double delta, const QuadratureGrid& g);

// Constant of ||u^{2t} - v^{2t}||_1 <= C ||phi_u - F_{1,0}||_{2*}, with its
// two-case form split at m+n = 4.
double comparison_constant(const ParamSet& p, const QuadratureGrid& g);

// Checks the L1-of-powers comparison bound on ratio-normalized corpus
// members whose lift sits within critical-norm distance 1 of F_{1,0}.
std::vector<BoundCheckRecord> check_l1_comparison_bound(const ParamSet& p,
                                                        std::span<const CorpusEntry> corpus,
                                                        const QuadratureGrid& g);

// Pointwise mean-value bound |u^{2t} - v^{2t}| <= 2^{(m+2n)/2} (m+2n)
// |H - w_u| / H^{(m+2n)/2+1} on the band H/2 <= w_u < H, H = 1 + r^2.
struct PointCheck {
    double r = 0.0;
    bool in_region = false;
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};
std::vector<PointCheck> check_pointwise_mv_bound(const ParamSet& p, const RadialProfile& u,
                                                 std::span<const double> radii);

// Empirical lower envelope of the deficit / squared-distance ratio: the min
// of be_ratio over the corpus (degenerate near-manifold members skipped).
double estimate_alpha(const ParamSet& p, std::span<const CylField> corpus,
                      const QuadratureGrid& g);

}  // namespace gns
