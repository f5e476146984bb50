#pragma once

#include <array>

#include "divisor.hpp"
#include "surface.hpp"

namespace maxface {

// Weierstrass pair (g, phi3) on a domain, phi3 stored as its dz coefficient.
// The optional involution is the deck transform identifying the double cover
// with a nonorientable quotient.
struct WeierstrassData {
    std::string label;
    Domain domain;
    CurveFunction g;
    CurveFunction phi3;
    InvolutionSpec involution;
    int chi_double_cover = 0;
    int chi_quotient = 0;

    bool nonorientable() const { return !involution.trivial(); }
};

struct FundamentalForms {
    CurveFunction g_phi3;       // g phi3, the (0,2)-weight piece
    CurveFunction phi3_over_g;  // phi3 / g
};

inline FundamentalForms fundamental_forms(const WeierstrassData& d) {
    return {d.g * d.phi3, d.phi3 / d.g};
}

// phi1 = (i/2)(1/g - g) phi3, phi2 = (1/2)(1/g + g) phi3.
inline std::array<CurveFunction, 3> phi_vector(const WeierstrassData& d) {
    FundamentalForms ff = fundamental_forms(d);
    cplx ih(0.0, 0.5);
    CurveFunction phi1 = ih * (ff.phi3_over_g - ff.g_phi3);
    CurveFunction phi2 = cplx(0.5, 0.0) * (ff.phi3_over_g + ff.g_phi3);
    return {phi1, phi2, d.phi3};
}

// Induced metric density ((|phi3/g| - |g phi3|)/2)^2; vanishes exactly on the
// singular set |g| = 1.
inline double conformal_factor(const WeierstrassData& d, const SurfacePoint& p) {
    FundamentalForms ff = fundamental_forms(d);
    double lo = std::abs(ff.phi3_over_g.eval(p.z, p.w));
    double hi = std::abs(ff.g_phi3.eval(p.z, p.w));
    double s = 0.5 * (lo - hi);
    return s * s;
}

// (|phi3/g| + |g phi3|)/2; strictly positive wherever the map is an immersion.
inline double regularity_density(const WeierstrassData& d, const SurfacePoint& p) {
    FundamentalForms ff = fundamental_forms(d);
    return 0.5 * (std::abs(ff.phi3_over_g.eval(p.z, p.w)) +
                  std::abs(ff.g_phi3.eval(p.z, p.w)));
}

inline double singular_field(const WeierstrassData& d, const SurfacePoint& p) {
    cplx gv = d.g.eval(p.z, p.w);
    return std::abs(gv) - 1.0;
}

// Deterministic sample points spread over the domain, away from removed and
// branch points.
inline std::vector<SurfacePoint> domain_samples(const Domain& dom, int n,
                                                double clearance_rel = 5e-3) {
    std::vector<SurfacePoint> out;
    auto special = dom.finite_special_points();
    double clearance = clearance_rel * dom.spread();
    int k = 0;
    while (int(out.size()) < n && k < 40 * n) {
        ++k;
        double theta = 2.0 * M_PI * std::fmod(0.6180339887498949 * k, 1.0);
        double rho = 2.3 * std::sin(2.3999632297286533 * k);
        cplx z = std::exp(cplx(rho, theta));
        bool ok = true;
        for (cplx sp : special)
            if (std::abs(z - sp) < clearance) ok = false;
        if (!ok) continue;
        SurfacePoint p{z, 0.0};
        if (!dom.on_plane()) p.w = dom.sqrt_fiber(z);
        out.push_back(p);
    }
    return out;
}

struct InvolutionCompat {
    double max_g_residual = 0.0;      // chordal gap between g(I p) and 1/conj(g p)
    double max_phi3_residual = 0.0;   // relative gap in the phi3 pullback identity
    int samples = 0;
};

// Checks g(I p) = 1/conj(g(p)) and I*phi3 = conj(phi3) on a point sample.
inline InvolutionCompat involution_compatibility(const WeierstrassData& d, int n = 200) {
    if (d.involution.trivial()) throw std::logic_error("no involution to check");
    InvolutionCompat out;
    for (const SurfacePoint& p : domain_samples(d.domain, n)) {
        SurfacePoint q = apply_involution(d.involution, p);
        cplx gp = d.g.eval(p.z, p.w);
        cplx gq = d.g.eval(q.z, q.w);
        if (std::abs(gp) < 1e-12) continue;
        out.max_g_residual =
            std::max(out.max_g_residual, chordal_distance(gq, 1.0 / std::conj(gp)));

        cplx rp = d.phi3.eval(p.z, p.w);
        cplx rq = d.phi3.eval(q.z, q.w);
        cplx pulled = rq * antiholomorphic_chart_derivative(d.involution, p.z);
        double denom = 1.0 + std::abs(rp);
        out.max_phi3_residual =
            std::max(out.max_phi3_residual, std::abs(pulled - std::conj(rp)) / denom);
        ++out.samples;
    }
    return out;
}

}  // namespace maxface
