// Acceptance suite: every case evaluates one gate criterion at its stated
// tolerance, prints a single PASS/FAIL line, and fails the test on FAIL.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "doctest.h"
#include "gns/functionals.hpp"
#include "gns/manifold.hpp"
#include "gns/runner.hpp"
#include "gns/verify.hpp"

using namespace gns;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

bool report(int num, const char* what, bool ok) {
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", num, what);
    std::fflush(stdout);
    return ok;
}

bool guarded(const std::function<bool()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        std::printf("      unexpected error: %s\n", e.what());
        return false;
    }
}

const std::vector<std::pair<int, double>> kGridPoints{{2, 3.0}, {2, 2.0}, {3, 2.0}, {4, 1.5}};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("criterion 1: sharp constants") {
    const bool ok = guarded([] {
        const auto t0 = std::chrono::steady_clock::now();
        const ParamSet p23 = derive_params(2, 3.0);
        const QuadratureGrid g23 = build_grid(p23, 64);
        const double a = sharp_gn_constant(p23, g23);
        const double s = sharp_sobolev_constant(p23, g23);  // m = n = 2
        const double elapsed = seconds_since(t0);
        std::printf("      A(2,3) = %.12f  (pi^-1/6 = %.12f)\n", a, std::pow(M_PI, -1.0 / 6.0));
        std::printf("      S^2(2,2) = %.12f  (sqrt(6)/8pi = %.12f), %.2fs\n", s * s,
                    std::sqrt(6.0) / (8.0 * M_PI), elapsed);
        return rel_err(a, std::pow(M_PI, -1.0 / 6.0)) < 1e-8 &&
               rel_err(s * s, std::sqrt(6.0) / (8.0 * M_PI)) < 1e-8 && elapsed < 1.0;
    });
    CHECK(report(1, "sharp-constant reproduction to 1e-8, under 1s", ok));
}

TEST_CASE("criterion 2: deficit identity on a 20+ profile corpus") {
    const bool ok = guarded([] {
        const auto t0 = std::chrono::steady_clock::now();
        int profiles = 0;
        bool all = true;
        for (const auto& [n, t] : kGridPoints) {
            const ParamSet p = derive_params(n, t);
            const QuadratureGrid g = build_grid(p, 64);
            for (const auto& entry : perturbed_corpus(p, 6, 17 + n)) {
                const RadialProfile u = normalize_ratio(entry.u, p, g);
                for (double r : {0.0, 0.5, 2.0, 10.0})
                    if (!(u.eval(r) > 0.0)) all = false;
                const DeficitReport rep = deficit_identity(u, p, g);
                const double scale = std::max(
                    {std::abs(rep.gn_deficit), std::abs(rep.sobolev_deficit) / rep.c1,
                     std::pow(lp_norm(u, 2.0 * p.t, p, g), 4.0 * p.t / p.two_star)});
                if (!(rep.identity_residual <= 1e-6 * scale)) {
                    std::printf("      residual %0.3e > tol at (%d, %.2f) %s\n",
                                rep.identity_residual, n, t, entry.id.c_str());
                    all = false;
                }
                if (!(rep.gn_deficit >= -1e-6 * scale &&
                      rep.sobolev_deficit >= -1e-6 * scale * rep.c1))
                    all = false;
                ++profiles;
            }
        }
        const double elapsed = seconds_since(t0);
        std::printf("      %d profiles across 4 parameter sets, %.1fs\n", profiles, elapsed);
        return all && profiles >= 20 && elapsed < 60.0;
    });
    CHECK(report(2, "deficit identity residual <= 1e-6 relative on the corpus", ok));
}

TEST_CASE("criterion 3: extremal characterization") {
    const bool ok = guarded([] {
        bool all = true;
        const ParamSet p = derive_params(2, 3.0);
        const QuadratureGrid g = build_grid(p, 64);
        const double e = 4.0 * p.t / p.two_star;
        for (double c : {1.0, 2.0})
            for (double lambda : {0.5, 1.0, 2.0}) {
                const RadialProfile u = scaled(gn_extremal(p, lambda), c);
                const double scale = std::pow(lp_norm(u, 2.0 * p.t, p, g), e);
                if (!(std::abs(gn_deficit(u, p, g)) <= 1e-8 * scale)) all = false;
            }
        for (double z : {1.0, 2.0})
            for (double s : {0.5, 1.0, 2.0}) {
                const CylField f = sobolev_extremal(p, s, z);
                const double crit = lp_norm(f, p.two_star, p, g);
                if (!(std::abs(sobolev_deficit(f, p, g)) <= 1e-8 * crit * crit)) all = false;
            }
        return all;
    });
    CHECK(report(3, "deficits vanish on both extremal families (1e-8 x scale)", ok));
}

TEST_CASE("criterion 4: quadrature vs Beta closed forms") {
    const bool ok = guarded([] {
        bool all = true;
        for (const auto& [n, t] : kGridPoints) {
            const ParamSet p = derive_params(n, t);
            const QuadratureGrid g = build_grid(p, 64);
            const double wm = sphere_area(p.m);

            // measure normalizations: the moment test at its three exponents
            for (double b : {0.5 * p.m + 1.0, p.m + p.n, p.two_star + p.m + p.n}) {
                const double quad =
                    g.height.integrate([b](double x) { return std::pow(1.0 + x * x, -b); });
                if (!(rel_err(quad, wm * beta_moment(p.m, b)) < 1e-8)) all = false;
            }

            // deficit link constant
            const double c1_quad = std::pow(
                g.height.integrate(
                    [&](double x) { return std::pow(1.0 + x * x, -(p.m + p.n)); }),
                2.0 / p.two_star);
            if (!(rel_err(c1_quad, deficit_link_constant(p)) < 1e-8)) all = false;

            // full-range comparison-constant ingredient
            const double full_quad = g.height.integrate([&](double x) {
                return std::pow(1.0 + x * x, -0.5 * p.two_star * (p.m + p.n));
            });
            const double full_exact = wm * beta_moment(p.m, p.two_star + p.m + p.n);
            if (!(rel_err(full_quad, full_exact) < 1e-8)) all = false;

            // truncated ingredient: composite rule vs one dense reference panel
            const GaussRule head = jacobi_rule(64, 0.0, p.m - 1.0);
            double trunc = 0.0;
            for (int i = 0; i < 64; ++i) {
                const double th = 0.5 * (head.nodes[i] + 1.0);
                trunc += std::pow(2.0, -p.m) * head.weights[i] *
                         std::pow(1.0 + th * th, -(p.m + p.n));
            }
            trunc += finite_rule(p.m - 1.0, 1.0, std::sqrt(2.0), 64).integrate([&](double th) {
                return std::pow(1.0 + th * th, -(p.m + p.n));
            });
            const double reference =
                finite_rule(0.0, 0.0, std::sqrt(2.0), 400).integrate([&](double th) {
                    return std::pow(th, p.m - 1.0) * std::pow(1.0 + th * th, -(p.m + p.n));
                });
            if (!(rel_err(trunc, reference) < 1e-8)) all = false;
        }
        return all;
    });
    CHECK(report(4, "every closed-form constant matches quadrature to 1e-8", ok));
}

TEST_CASE("criterion 5: stability exponent near 1/2") {
    const bool ok = guarded([] {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
        bool all = true;
        int combos = 0;
        for (const auto& [n, t] : kGridPoints) {
            const ParamSet p = derive_params(n, t);
            const QuadratureGrid g = build_grid(p, 64);
            for (BumpShape shape : {BumpShape::ring, BumpShape::core}) {
                const ProbeResult r = stability_probe(p, shape, eps, g);
                std::printf("      (%d, %.2f) %s: slope %.4f\n", n, t, bump_name(shape),
                            r.fitted_slope);
                if (!(r.fitted_slope >= 0.45 && r.fitted_slope <= 0.55)) all = false;
                ++combos;
            }
        }
        const double elapsed = seconds_since(t0);
        std::printf("      %d combinations, %.1fs\n", combos, elapsed);
        return all && combos >= 6 && elapsed < 300.0;
    });
    CHECK(report(5, "fitted L1-distance-vs-deficit slope in [0.45, 0.55]", ok));
}

TEST_CASE("criterion 6: bound-check margins") {
    const bool ok = guarded([] {
        bool all = true;
        for (const auto& [n, t] : kGridPoints) {
            const ParamSet p = derive_params(n, t);
            const QuadratureGrid g = build_grid(p, 64);

            const double cap = proximity_delta_cap(p, g);
            const double delta = 0.0625 * cap * cap;
            int passing = 0;
            for (const auto& rec :
                 check_proximity_bound(p, perturbed_corpus(p, 6, 23, 0.5 * cap), delta, g)) {
                if (!rec.hypothesis_ok) continue;
                ++passing;
                if (!(rec.margin >= 0.0)) all = false;
            }
            if (passing == 0) all = false;

            passing = 0;
            for (const auto& rec :
                 check_l1_comparison_bound(p, perturbed_corpus(p, 6, 29), g)) {
                if (!rec.hypothesis_ok) continue;
                ++passing;
                if (!(rec.margin >= 0.0)) all = false;
            }
            if (passing == 0) all = false;

            const RadialProfile mix = normalize_mass(
                combine(0.9, gn_extremal(p, 1.0), 0.1, gn_extremal(p, 2.0)), p, g);
            const std::vector<double> radii{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
            int in_band = 0;
            for (const PointCheck& pc : check_pointwise_mv_bound(p, mix, radii)) {
                if (pc.in_region) ++in_band;
                if (!pc.holds) all = false;
            }
            if (in_band == 0) all = false;
        }
        return all;
    });
    CHECK(report(6, "proximity/L1-comparison/pointwise bounds hold on all passing inputs", ok));
}

TEST_CASE("criterion 7: stability-constant positivity and sharpness trend") {
    const bool ok = guarded([] {
        const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
        bool all = true;
        for (const auto& [n, t] : kGridPoints) {
            const ParamSet p = derive_params(n, t);
            const QuadratureGrid g = build_grid(p, 64);

            std::vector<CylField> fields;
            for (const auto& entry : perturbed_corpus(p, 10, 31))
                fields.push_back(lift(normalize_ratio(entry.u, p, g), p));
            const double alpha = estimate_alpha(p, fields, g);
            std::printf("      (%d, %.2f): alpha envelope %.5f\n", n, t, alpha);
            if (!(alpha > 0.0)) all = false;

            const auto sharp = sharpness_probe(p, 1.5, eps, g);
            for (std::size_t i = 1; i < sharp.size(); ++i)
                if (!(sharp[i] < sharp[i - 1])) all = false;
            if (!(sharp.back() < 0.5 * sharp.front())) all = false;  // heading to zero

            const auto flat = sharpness_probe(p, 2.0, eps, g);
            double lo = flat[0];
            for (double v : flat) lo = std::min(lo, v);
            if (!(lo > 0.0 && lo > 0.5 * flat.front())) all = false;
        }
        return all;
    });
    CHECK(report(7, "alpha envelope positive; beta=1.5 ratios decay, beta=2 bounded below", ok));
}

TEST_CASE("criterion 8: invariance suite") {
    const bool ok = guarded([] {
        const ParamSet p = derive_params(2, 3.0);
        const QuadratureGrid g = build_grid(p, 40);
        bool all = true;

        const RadialProfile u = normalize_ratio(
            combine(1.0, gn_extremal(p, 1.0), 0.05, bump_profile(p, BumpShape::ring)), p, g);
        const double def0 = gn_deficit(u, p, g);
        const double mass0 = lp_norm(u, 2.0 * p.t, p, g);
        for (double lambda : {0.25, 4.0}) {
            const RadialProfile ul = gn_rescale(u, lambda, p);
            if (!(std::abs(gn_deficit(ul, p, g) - def0) <= 1e-7 * std::max(1.0, def0)))
                all = false;
            if (!(rel_err(lp_norm(ul, 2.0 * p.t, p, g), mass0) < 1e-7)) all = false;
        }

        // distance fits vs 41x41 log-spaced scans and first-order optimality
        const CylField phi = lift(u, p);
        struct Scan {
            double min_value, gap;
        };
        auto scan41 = [](const std::function<double(double, double)>& objective, double zc,
                         double sc) {
            const int n = 41;
            std::vector<std::vector<double>> vals(n, std::vector<double>(n));
            int bi = 0, bj = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double z = zc * std::pow(16.0, i / (n - 1.0) - 0.5);
                    const double s = sc * std::pow(16.0, j / (n - 1.0) - 0.5);
                    vals[i][j] = objective(z, s);
                    if (vals[i][j] < vals[bi][bj]) {
                        bi = i;
                        bj = j;
                    }
                }
            double gz = 0.0, gs = 0.0;
            if (bi > 0) gz = vals[bi - 1][bj] - vals[bi][bj];
            if (bi + 1 < n) gz = std::max(gz, vals[bi + 1][bj] - vals[bi][bj]);
            if (bj > 0) gs = vals[bi][bj - 1] - vals[bi][bj];
            if (bj + 1 < n) gs = std::max(gs, vals[bi][bj + 1] - vals[bi][bj]);
            return Scan{vals[bi][bj], gz + gs};
        };

        const ManifoldFit h1 = h1_distance(phi, p, g);
        const Scan h1_scan = scan41(
            [&](double z, double s) { return h1_fit_objective(phi, p, g, z, s); }, h1.z_opt,
            h1.s_opt);
        if (!(h1.distance <= h1_scan.min_value * (1.0 + 1e-6))) all = false;
        if (!(h1_scan.min_value - h1.distance <=
              h1_scan.gap + 1e-6 * h1_scan.min_value))
            all = false;

        const ManifoldFit lp = lp_distance(phi, p, g);
        const Scan lp_scan = scan41(
            [&](double z, double s) { return lp_fit_objective(phi, p, g, z, s); }, lp.z_opt,
            lp.s_opt);
        if (!(lp.distance <= lp_scan.min_value * (1.0 + 1e-6))) all = false;
        if (!(lp_scan.min_value - lp.distance <=
              lp_scan.gap + 1e-6 * lp_scan.min_value))
            all = false;

        auto first_order_ok = [&](const ManifoldFit& fit,
                                  double (*objective)(const CylField&, const ParamSet&,
                                                      const QuadratureGrid&, double, double)) {
            const double at = objective(phi, p, g, fit.z_opt, fit.s_opt);
            for (double bump : {1e-3, -1e-3}) {
                if (!(objective(phi, p, g, fit.z_opt * (1.0 + bump), fit.s_opt) >=
                      at * (1.0 - 1e-9)))
                    return false;
                if (!(objective(phi, p, g, fit.z_opt, fit.s_opt * (1.0 + bump)) >=
                      at * (1.0 - 1e-9)))
                    return false;
            }
            return true;
        };
        if (!first_order_ok(h1, &h1_fit_objective)) all = false;
        if (!first_order_ok(lp, &lp_fit_objective)) all = false;

        const ManifoldFit l1 = l1_gn_distance(u, p, g);
        double l1_scan = l1_fit_objective(u, p, g, l1.lambda_opt);
        for (int k = 0; k <= 40; ++k) {
            const double lambda = l1.lambda_opt * std::pow(16.0, k / 40.0 - 0.5);
            l1_scan = std::min(l1_scan, l1_fit_objective(u, p, g, lambda));
        }
        if (!(l1.distance <= l1_scan * (1.0 + 1e-6))) all = false;

        return all;
    });
    CHECK(report(8, "rescale invariance and grid-scan agreement of every fit", ok));
}
