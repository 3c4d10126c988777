#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gns/verify.hpp"

using namespace gns;

namespace {
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("bump profiles: sign, decay, derivative consistency") {
    const ParamSet p = derive_params(2, 3.0);
    const RadialProfile ring = bump_profile(p, BumpShape::ring);
    const RadialProfile core = bump_profile(p, BumpShape::core);
    CHECK(ring.eval(0.0) == doctest::Approx(0.0));
    CHECK(ring.eval(1.0) > 0.0);
    CHECK(core.eval(0.0) == doctest::Approx(1.0));
    // finite-difference check of the analytic derivatives
    const double h = 1e-6;
    for (double r : {0.3, 1.0, 4.0}) {
        CHECK(std::abs((ring.eval(r + h) - ring.eval(r - h)) / (2 * h) - ring.deriv(r)) < 1e-7);
        CHECK(std::abs((core.eval(r + h) - core.eval(r - h)) / (2 * h) - core.deriv(r)) < 1e-7);
    }
    CHECK(ring.decay_exponent >= 2.0 / (p.t - 1.0));
    CHECK(core.decay_exponent > ring.decay_exponent);
}

TEST_CASE("perturbed_corpus is positive and deterministic under a seed") {
    const ParamSet p = derive_params(3, 2.0);
    const auto a = perturbed_corpus(p, 8, 42);
    const auto b = perturbed_corpus(p, 8, 42);
    REQUIRE(a.size() == 8);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].id == b[k].id);
        for (double r : {0.0, 0.5, 1.5, 6.0}) {
            CHECK(a[k].u.eval(r) > 0.0);
            CHECK(a[k].u.eval(r) == doctest::Approx(b[k].u.eval(r)).epsilon(1e-15));
        }
    }
    const auto c = perturbed_corpus(p, 8, 43);
    CHECK(c[0].u.eval(1.0) != a[0].u.eval(1.0));
}

TEST_CASE("fit_loglog recovers an exact power law") {
    std::vector<double> x{1.0, 2.0, 4.0, 8.0}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
    const LogLogFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.rms_residual < 1e-13);
    CHECK_THROWS_AS(fit_loglog(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("stability probe: slope near 1/2, shrinking deficits, input validation") {
    const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
    for (auto [n, t] : {std::pair{2, 3.0}, {2, 2.0}, {3, 2.0}, {4, 1.5}}) {
        const ParamSet p = derive_params(n, t);
        const QuadratureGrid g = build_grid(p, 64);
        for (BumpShape shape : {BumpShape::ring, BumpShape::core}) {
            const ProbeResult r = stability_probe(p, shape, eps, g);
            CHECK_FALSE(r.noise_floor);
            CHECK(r.fitted_slope > 0.45);
            CHECK(r.fitted_slope < 0.55);
            CHECK(r.observed_bound_constant > 0.0);
            // both quantities head to zero with eps
            CHECK(r.deficits.back() < 0.1 * r.deficits.front());
            CHECK(r.l1_distances.back() < 0.5 * r.l1_distances.front());
            for (std::size_t i = 1; i < r.deficits.size(); ++i)
                CHECK(r.deficits[i] < r.deficits[i - 1]);
        }
    }
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 32);
    CHECK_THROWS_AS(stability_probe(p, BumpShape::ring, std::vector<double>{0.1, 0.05, 0.025}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        stability_probe(p, BumpShape::ring, std::vector<double>{0.3, 0.1, 0.05, 0.025}, g),
        std::invalid_argument);
}

TEST_CASE("sharpness probe: flat at the critical power, decaying below it") {
    const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 64);

    const auto flat = sharpness_probe(p, 2.0, eps, g);
    double lo = flat[0], hi = flat[0];
    for (double v : flat) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo > 0.0);
    CHECK(lo > 0.8 * hi);  // bounded below, essentially constant

    const auto decaying = sharpness_probe(p, 1.5, eps, g);
    for (std::size_t i = 1; i < decaying.size(); ++i) {
        CHECK(decaying[i] < decaying[i - 1]);
        const double factor = decaying[i - 1] / decaying[i];
        // per-halving decay factor approaches 2^{2-beta} = sqrt(2) from below
        if (eps[i - 1] <= 0.05 + 1e-12) {
            CHECK(factor > 4.0 / 3.0);
            CHECK(factor < std::sqrt(2.0) + 0.02);
        }
    }

    const auto fastest = sharpness_probe(p, 0.0, eps, g);
    for (std::size_t i = 1; i < fastest.size(); ++i)
        CHECK(fastest[i - 1] / fastest[i] > decaying[i - 1] / decaying[i]);

    CHECK_THROWS_AS(sharpness_probe(p, 2.5, eps, g), std::invalid_argument);
}

TEST_CASE("proximity bound: constants and margins at m = n = 2") {
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 64);

    // closed-form assembly of the constant: gamma = 1, 2* = 4
    const double f_crit = std::pow(M_PI * M_PI / 6.0, 0.25);
    const double c4_want =
        2.0 + 12.0 * std::pow(2.0, 4.25) * std::pow(1.0 / (M_PI * M_PI), 0.25) * f_crit;
    CHECK(rel_err(proximity_constant(p, g), c4_want) < 1e-8);

    const double cap_want = std::sqrt(M_PI) / (12.0 * std::pow(2.0, 5.25));
    CHECK(rel_err(proximity_delta_cap(p, g), cap_want) < 1e-8);

    const double cap = proximity_delta_cap(p, g);
    const double delta = 0.0625 * cap * cap;  // sqrt(delta) = cap / 4
    const auto corpus = perturbed_corpus(p, 6, 7, 2e-3);
    const auto records = check_proximity_bound(p, corpus, delta, g);
    REQUIRE(records.size() == corpus.size());
    int passing = 0;
    for (const auto& rec : records) {
        if (!rec.hypothesis_ok) continue;
        ++passing;
        CHECK(rec.margin >= 0.0);
        CHECK(rec.rhs == doctest::Approx(proximity_constant(p, g) * std::sqrt(delta)));
    }
    CHECK(passing >= 4);

    // the unperturbed extremal has lhs = 0, so the margin is the full rhs
    std::vector<CorpusEntry> trivial{{"extremal", gn_extremal(p, 1.0)}};
    const auto at_f = check_proximity_bound(p, trivial, delta, g);
    CHECK(at_f[0].hypothesis_ok);
    CHECK(at_f[0].lhs < 1e-8);
    CHECK(at_f[0].margin == doctest::Approx(at_f[0].rhs).epsilon(1e-6));

    CHECK_THROWS_AS(check_proximity_bound(p, corpus, cap * cap * 4.0, g), std::invalid_argument);
}

TEST_CASE("L1 comparison bound: case split constant and nonnegative margins") {
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 64);

    // m + n = 4 sits in the lower branch; assemble the expected constant
    const double first = 24.0 * std::pow(M_PI / 2.0, 0.75) * std::pow(M_PI / 7.0, -0.25);
    const double trunc = (M_PI / 3.0) * (26.0 / 27.0);
    const double second = 256.0 / trunc;
    CHECK(rel_err(comparison_constant(p, g), 4.0 * std::max(first, second)) < 1e-8);

    const auto corpus = perturbed_corpus(p, 6, 11);
    const auto records = check_l1_comparison_bound(p, corpus, g);
    int passing = 0;
    for (const auto& rec : records) {
        if (!rec.hypothesis_ok) continue;
        ++passing;
        CHECK(rec.margin >= 0.0);
        CHECK(rec.lhs >= 0.0);
    }
    CHECK(passing >= 4);

    std::vector<CorpusEntry> trivial{{"extremal", gn_extremal(p, 1.0)}};
    const auto at_v = check_l1_comparison_bound(p, trivial, g);
    CHECK(at_v[0].hypothesis_ok);
    CHECK(at_v[0].lhs < 1e-6);
    CHECK(at_v[0].margin > 0.0);

    // the upper branch engages for m + n > 4
    const ParamSet q = derive_params(3, 2.0);  // m = 2, m + n = 5
    const QuadratureGrid gq = build_grid(q, 64);
    CHECK(comparison_constant(q, gq) > 0.0);
    const auto qrecs = check_l1_comparison_bound(q, perturbed_corpus(q, 4, 3), gq);
    for (const auto& rec : qrecs)
        if (rec.hypothesis_ok) CHECK(rec.margin >= 0.0);
}

TEST_CASE("pointwise mean-value bound") {
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 48);
    const std::vector<double> radii{0.0, 0.2, 0.4, 0.5, 1.0, 2.0};

    // at the extremal w = H exactly: every point sits on the excluded
    // boundary, the bound holds vacuously
    const auto at_v = check_pointwise_mv_bound(p, gn_extremal(p, 1.0), radii);
    for (const auto& pc : at_v) {
        CHECK(pc.holds);
        CHECK(pc.lhs < 1e-14);
    }

    // mixture profile: some radii in the band, all bound checks pass
    const RadialProfile mix = normalize_mass(
        combine(0.9, gn_extremal(p, 1.0), 0.1, gn_extremal(p, 2.0)), p, g);
    const auto at_mix = check_pointwise_mv_bound(p, mix, radii);
    int inside = 0;
    for (const auto& pc : at_mix) {
        CHECK(pc.holds);
        if (pc.in_region) ++inside;
    }
    CHECK(inside >= 1);

    // exact band boundary w = H/2: scaling the extremal by 2^{1/(t-1)}
    const RadialProfile edge = scaled(gn_extremal(p, 1.0), std::pow(2.0, 1.0 / (p.t - 1.0)));
    const auto at_edge = check_pointwise_mv_bound(p, edge, radii);
    for (const auto& pc : at_edge) {
        CHECK(pc.in_region);
        CHECK(pc.holds);
        CHECK(pc.rhs > 0.0);
    }
}

TEST_CASE("be_ratio limit along a shrinking perturbation stays positive") {
    // monitored, not asserted to a value: Richardson extrapolation of the
    // deficit / squared-distance ratio as the perturbation size halves
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 48);
    const CylField f = sobolev_extremal(p, 1.0, 1.0);
    CylField eta;
    const double e = p.gamma + 2.0;
    eta.eval = [e](double r, double rho) { return std::pow(1.0 + r * r + rho * rho, -e); };
    eta.d_r = [e](double r, double rho) {
        return -2.0 * e * r * std::pow(1.0 + r * r + rho * rho, -e - 1.0);
    };
    eta.d_rho = [e](double r, double rho) {
        return -2.0 * e * rho * std::pow(1.0 + r * r + rho * rho, -e - 1.0);
    };
    eta.decay_exponent = 2.0 * e;

    std::vector<double> ratios;
    for (double eps : {0.1, 0.05, 0.025})
        ratios.push_back(be_ratio(combine(1.0, f, eps, eta), p, g));
    for (double r : ratios) CHECK(r > 0.0);
    // first-order Richardson: r* ~ 2 r(eps/2) - r(eps)
    const double extrapolated = 2.0 * ratios[2] - ratios[1];
    CHECK(extrapolated > 0.0);
    // successive extrapolants agree to a few percent if the limit exists
    const double coarse = 2.0 * ratios[1] - ratios[0];
    CHECK(std::abs(extrapolated - coarse) < 0.05 * std::abs(extrapolated));
}

TEST_CASE("estimate_alpha: positive on mixed corpora, error when all guarded out") {
    const ParamSet p = derive_params(2, 3.0);
    const QuadratureGrid g = build_grid(p, 48);

    std::vector<CylField> manifold_only{sobolev_extremal(p, 1.0, 1.0),
                                        sobolev_extremal(p, 2.0, 3.0)};
    CHECK_THROWS_AS(estimate_alpha(p, manifold_only, g), std::runtime_error);

    std::vector<CylField> mixed = manifold_only;
    const auto corpus = perturbed_corpus(p, 4, 5);
    for (const auto& e : corpus) mixed.push_back(lift(normalize_ratio(e.u, p, g), p));
    const double alpha = estimate_alpha(p, mixed, g);
    CHECK(alpha > 0.0);

    // the min is monotone under corpus growth
    std::vector<CylField> larger = mixed;
    larger.push_back(lift(normalize_ratio(corpus[0].u, p, g), p));
    CHECK(estimate_alpha(p, larger, g) <= alpha * (1.0 + 1e-12));
}
