#include "gns/profiles.hpp"

#include <algorithm>

namespace gns {

RadialProfile combine(double ca, const RadialProfile& a, double cb, const RadialProfile& b) {
    RadialProfile out;
    auto ae = a.eval, be = b.eval;
    auto ad = a.deriv, bd = b.deriv;
    out.eval = [=](double r) { return ca * ae(r) + cb * be(r); };
    out.deriv = [=](double r) { return ca * ad(r) + cb * bd(r); };
    out.decay_exponent = std::min(a.decay_exponent, b.decay_exponent);
    return out;
}

CylField combine(double ca, const CylField& a, double cb, const CylField& b) {
    CylField out;
    auto ae = a.eval, be = b.eval;
    auto ar = a.d_r, br = b.d_r;
    auto ah = a.d_rho, bh = b.d_rho;
    out.eval = [=](double r, double rho) { return ca * ae(r, rho) + cb * be(r, rho); };
    out.d_r = [=](double r, double rho) { return ca * ar(r, rho) + cb * br(r, rho); };
    out.d_rho = [=](double r, double rho) { return ca * ah(r, rho) + cb * bh(r, rho); };
    out.decay_exponent = std::min(a.decay_exponent, b.decay_exponent);
    return out;
}

RadialProfile scaled(const RadialProfile& f, double c) {
    RadialProfile out;
    auto e = f.eval;
    auto d = f.deriv;
    out.eval = [=](double r) { return c * e(r); };
    out.deriv = [=](double r) { return c * d(r); };
    out.decay_exponent = f.decay_exponent;
    return out;
}

CylField scaled(const CylField& f, double c) {
    CylField out;
    auto e = f.eval;
    auto dr = f.d_r;
    auto dh = f.d_rho;
    out.eval = [=](double r, double rho) { return c * e(r, rho); };
    out.d_r = [=](double r, double rho) { return c * dr(r, rho); };
    out.d_rho = [=](double r, double rho) { return c * dh(r, rho); };
    out.decay_exponent = f.decay_exponent;
    return out;
}

}  // namespace gns
