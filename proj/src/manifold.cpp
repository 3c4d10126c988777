#include "gns/manifold.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gns/functionals.hpp"

namespace gns {

ScalarMin golden_min(const std::function<double(double)>& f, double lo, double hi,
                     double tol, int scan_points) {
    if (!(hi > lo)) throw std::invalid_argument("golden_min: empty bracket");
    if (scan_points < 3) throw std::invalid_argument("golden_min: need at least 3 scan points");

    ScalarMin out;
    int best = 0;
    double best_val = 0.0;
    std::vector<double> xs(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        xs[i] = lo + (hi - lo) * i / (scan_points - 1);
        const double v = f(xs[i]);
        ++out.iterations;
        if (i == 0 || v < best_val) {
            best = i;
            best_val = v;
        }
    }
    if (best == 0 || best == scan_points - 1) {
        out.x = xs[best];
        out.value = best_val;
        out.interior = false;
        return out;
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = xs[best - 1], b = xs[best + 1];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    out.iterations += 2;
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++out.iterations;
    }
    if (fc < fd) {
        out.x = c;
        out.value = fc;
    } else {
        out.x = d;
        out.value = fd;
    }
    out.interior = true;
    return out;
}

namespace {

// Flattened tensor-grid samples of a field's values and partials.
struct FieldCache {
    std::vector<double> w;    // combined weights
    std::vector<double> r;    // radial coordinate per point
    std::vector<double> rho;  // height coordinate per point
    std::vector<double> val;
    std::vector<double> dr;
    std::vector<double> drho;
};

FieldCache cache_field(const CylField& phi, const QuadratureGrid& g, bool need_partials) {
    FieldCache c;
    const std::size_t total = g.radial.nodes.size() * g.height.nodes.size();
    c.w.reserve(total);
    c.r.reserve(total);
    c.rho.reserve(total);
    c.val.reserve(total);
    if (need_partials) {
        c.dr.reserve(total);
        c.drho.reserve(total);
    }
    for_each_cyl_point(g, [&](double r, double rho, double w) {
        c.w.push_back(w);
        c.r.push_back(r);
        c.rho.push_back(rho);
        c.val.push_back(phi.eval(r, rho));
        if (need_partials) {
            c.dr.push_back(phi.d_r(r, rho));
            c.drho.push_back(phi.d_rho(r, rho));
        }
    });
    return c;
}

struct BracketResult {
    ScalarMin best;
    double lo = 0.0, hi = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Golden search on the log axis over [1/16, 16], widened once on edge hits.
BracketResult fit_log_scale(const std::function<double(double)>& objective) {
    BracketResult out;
    const double brackets[2][2] = {{1.0 / 16.0, 16.0}, {1.0 / 256.0, 256.0}};
    for (const auto& br : brackets) {
        auto res = golden_min([&](double y) { return objective(std::exp(y)); },
                              std::log(br[0]), std::log(br[1]), 1e-6);
        out.iterations += res.iterations;
        out.best = res;
        out.lo = br[0];
        out.hi = br[1];
        if (res.interior) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// Minimizes sum w |val - z * s^gamma D^{-gamma}|^{2*} over z by safeguarded
// Newton on the strictly increasing derivative. Returns {z, objective value}.
struct ZSolve {
    double z = 0.0;
    double value = 0.0;
};

ZSolve min_over_multiple(const FieldCache& c, const ParamSet& p, double s, double phi_crit_norm) {
    const std::size_t total = c.w.size();
    std::vector<double> f(total);
    const double s2 = s * s;
    const double amp = std::pow(s, p.gamma);
    double f_norm_pow = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        f[k] = amp * std::pow(1.0 + s2 * (c.r[k] * c.r[k] + c.rho[k] * c.rho[k]), -p.gamma);
        f_norm_pow += c.w[k] * std::pow(f[k], p.two_star);
    }
    const double f_norm = std::pow(f_norm_pow, 1.0 / p.two_star);
    const double ts = p.two_star;

    auto sweep = [&](double z, double& j, double& jp, double& jpp) {
        j = jp = jpp = 0.0;
        for (std::size_t k = 0; k < total; ++k) {
            const double d = c.val[k] - z * f[k];
            const double ad = std::abs(d);
            const double base = std::pow(ad, ts - 2.0);
            j += c.w[k] * base * ad * ad;
            jp -= c.w[k] * ts * base * ad * ((d >= 0.0) ? 1.0 : -1.0) * f[k];
            jpp += c.w[k] * ts * (ts - 1.0) * base * f[k] * f[k];
        }
    };

    // the optimum satisfies |z| ||F|| <= 2 ||phi||; expand if the sign check
    // ever disagrees
    double zlim = 2.5 * phi_crit_norm / f_norm + 1.0;
    double zlo = -zlim, zhi = zlim;
    double j, jp, jpp;
    for (int guard = 0; guard < 8; ++guard) {
        sweep(zlo, j, jp, jpp);
        if (jp < 0.0) break;
        zlo *= 2.0;
    }
    for (int guard = 0; guard < 8; ++guard) {
        sweep(zhi, j, jp, jpp);
        if (jp > 0.0) break;
        zhi *= 2.0;
    }

    double z = 0.5 * (zlo + zhi);
    for (int it = 0; it < 80; ++it) {
        sweep(z, j, jp, jpp);
        if (jp < 0.0)
            zlo = z;
        else
            zhi = z;
        double znew = z - jp / jpp;
        if (!std::isfinite(znew) || znew <= zlo || znew >= zhi) znew = 0.5 * (zlo + zhi);
        if (std::abs(znew - z) <= 1e-12 * (1.0 + std::abs(z))) {
            z = znew;
            break;
        }
        z = znew;
    }
    sweep(z, j, jp, jpp);
    return {z, std::pow(j, 1.0 / ts)};
}

}  // namespace

ManifoldFit h1_distance(const CylField& phi, const ParamSet& p, const QuadratureGrid& g) {
    const FieldCache c = cache_field(phi, g, true);
    double phi_h1_sq = 0.0;
    for (std::size_t k = 0; k < c.w.size(); ++k)
        phi_h1_sq += c.w[k] * (c.dr[k] * c.dr[k] + c.drho[k] * c.drho[k]);
    const CylField f1 = sobolev_extremal(p, 1.0, 1.0);
    const double denom = [&] {
        const double h = h1_seminorm(f1, p, g);
        return h * h;
    }();

    // <phi, F_s>_{H1}; both partials of F_s share the factor
    // -2 gamma s^{gamma+2} D^{-gamma-1}
    auto inner_with = [&](double s) {
        const double s2 = s * s;
        const double amp = -2.0 * p.gamma * std::pow(s, p.gamma + 2.0);
        double acc = 0.0;
        for (std::size_t k = 0; k < c.w.size(); ++k) {
            const double d = std::pow(1.0 + s2 * (c.r[k] * c.r[k] + c.rho[k] * c.rho[k]),
                                      -p.gamma - 1.0);
            acc += c.w[k] * d * (c.dr[k] * c.r[k] + c.drho[k] * c.rho[k]);
        }
        return amp * acc;
    };
    auto objective = [&](double s) {
        const double ip = inner_with(s);
        return phi_h1_sq - ip * ip / denom;
    };

    const BracketResult br = fit_log_scale(objective);
    ManifoldFit fit;
    fit.s_opt = std::exp(br.best.x);
    fit.z_opt = inner_with(fit.s_opt) / denom;
    fit.distance = std::sqrt(std::max(0.0, br.best.value));
    fit.iterations = br.iterations;
    fit.bracket_lo = br.lo;
    fit.bracket_hi = br.hi;
    fit.converged = br.converged;
    return fit;
}

ManifoldFit lp_distance(const CylField& phi, const ParamSet& p, const QuadratureGrid& g) {
    const FieldCache c = cache_field(phi, g, false);
    double crit_pow = 0.0;
    for (std::size_t k = 0; k < c.w.size(); ++k)
        crit_pow += c.w[k] * std::pow(std::abs(c.val[k]), p.two_star);
    const double phi_crit = std::pow(crit_pow, 1.0 / p.two_star);

    auto objective = [&](double s) { return min_over_multiple(c, p, s, phi_crit).value; };

    const BracketResult br = fit_log_scale(objective);
    ManifoldFit fit;
    fit.s_opt = std::exp(br.best.x);
    fit.z_opt = min_over_multiple(c, p, fit.s_opt, phi_crit).z;
    fit.distance = br.best.value;
    fit.iterations = br.iterations;
    fit.bracket_lo = br.lo;
    fit.bracket_hi = br.hi;
    fit.converged = br.converged;
    return fit;
}

ManifoldFit l1_gn_distance(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g) {
    const std::size_t nr = g.radial.nodes.size();
    std::vector<double> u2t(nr);
    for (std::size_t i = 0; i < nr; ++i)
        u2t[i] = std::pow(std::abs(u.eval(g.radial.nodes[i])), 2.0 * p.t);

    // v_lambda^{2t}(r) = lambda^n (1 + lambda^2 r^2)^{-(m+2n)/2}
    const double half_pow = 0.5 * (p.m + 2.0 * p.n);
    auto objective = [&](double lambda) {
        const double l2 = lambda * lambda;
        const double amp = std::pow(lambda, static_cast<double>(p.n));
        double acc = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = g.radial.nodes[i];
            acc += g.radial.weights[i] *
                   std::abs(u2t[i] - amp * std::pow(1.0 + l2 * r * r, -half_pow));
        }
        return acc;
    };

    const BracketResult br = fit_log_scale(objective);
    ManifoldFit fit;
    fit.lambda_opt = std::exp(br.best.x);
    fit.distance = br.best.value;
    fit.iterations = br.iterations;
    fit.bracket_lo = br.lo;
    fit.bracket_hi = br.hi;
    fit.converged = br.converged;
    return fit;
}

double be_ratio(const CylField& phi, const ParamSet& p, const QuadratureGrid& g) {
    const ManifoldFit fit = h1_distance(phi, p, g);
    const double scale = h1_seminorm(phi, p, g);
    if (!(fit.distance > 1e-4 * scale))
        throw std::domain_error("be_ratio: input is degenerately close to the manifold");
    return sobolev_deficit(phi, p, g) / (fit.distance * fit.distance);
}

double h1_fit_objective(const CylField& phi, const ParamSet& p, const QuadratureGrid& g,
                        double z, double s) {
    return h1_seminorm(combine(1.0, phi, -z, sobolev_extremal(p, s, 1.0)), p, g);
}

double lp_fit_objective(const CylField& phi, const ParamSet& p, const QuadratureGrid& g,
                        double z, double s) {
    return lp_norm(combine(1.0, phi, -z, sobolev_extremal(p, s, 1.0)), p.two_star, p, g);
}

double l1_fit_objective(const RadialProfile& u, const ParamSet& p, const QuadratureGrid& g,
                        double lambda) {
    const RadialProfile v = gn_extremal(p, lambda);
    const double tt = 2.0 * p.t;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.radial.nodes.size(); ++i) {
        const double r = g.radial.nodes[i];
        acc += g.radial.weights[i] *
               std::abs(std::pow(std::abs(u.eval(r)), tt) - std::pow(v.eval(r), tt));
    }
    return acc;
}

}  // namespace gns
