#pragma once

#include <map>

#include "periods.hpp"

namespace maxface {

struct EndInfo {
    PointOnCurve point;
    std::array<int, 3> ord_phi{0, 0, 0};  // orders of phi1, phi2, phi3 as forms
    int mu = 0;                           // largest pole order minus one
    std::array<cplx, 3> residues{};
};

inline std::vector<EndInfo> end_analysis(const WeierstrassData& d,
                                         const QuadratureConfig& cfg = {}) {
    auto phis = phi_vector(d);
    std::vector<EndInfo> out;
    for (const PointOnCurve& e : d.domain.ends()) {
        EndInfo info;
        info.point = e;
        int worst = 0;
        for (int j = 0; j < 3; ++j) {
            info.ord_phi[j] = order_at(d.domain, phis[j], e, true);
            worst = std::max(worst, -info.ord_phi[j]);
            info.residues[j] = residue_at(d.domain, phis[j], e, cfg);
        }
        info.mu = worst - 1;
        out.push_back(std::move(info));
    }
    return out;
}

// Degree of g as a map by counting preimages of generic values; each root of
// (a - c)^2 - b^2 f is one point of the curve.
inline int gauss_degree_numeric(const Domain& dom, const CurveFunction& g) {
    if (dom.on_plane()) return g.a.map_degree();
    const ComplexRational& f = *dom.curve();
    int last = -1;
    cplx c(1.37, 0.41);
    for (int attempt = 0; attempt < 10; ++attempt, c *= cplx(0.93, 0.31)) {
        ComplexRational shifted = g.a - ComplexRational::constant(c);
        ComplexRational norm = shifted * shifted - g.b * g.b * f;
        if (norm.is_zero() || norm.num().degree() < 0) continue;
        bool simple = true;
        if (norm.num().degree() >= 1)
            for (const auto& cl : cluster_roots(poly_roots(norm.num())))
                if (cl.multiplicity != 1) simple = false;
        if (!simple) continue;
        int count = std::max(norm.num().degree(), 0);
        if (count == last) return count;
        last = count;
    }
    throw std::runtime_error("generic preimage count did not stabilize");
}

struct ParityFlags {
    bool deg_even = false;
    bool deg_ge_4 = false;
    bool chi_mod_4 = false;  // chi of the double cover divisible by 4
};

struct TopologyReport {
    int chi_bar = 0;
    std::optional<int> chi_bar_quotient;
    int n_ends = 0;
    int deg_g = 0;
    int jm_residual = 0;            // 2 deg g - (-chi + sum(mu_i + 1))
    std::optional<int> jm_residual_quotient;
    std::vector<std::array<int, 2>> end_orbits;  // index pairs under the involution
    ParityFlags parity;

    nlohmann::json to_json() const {
        nlohmann::json j{{"chi_bar", chi_bar},
                         {"n_ends", n_ends},
                         {"deg_g", deg_g},
                         {"jm_residual", jm_residual},
                         {"parity_flags",
                          {{"deg_even", parity.deg_even},
                           {"deg_ge_4", parity.deg_ge_4},
                           {"chi_mod_4", parity.chi_mod_4}}}};
        if (chi_bar_quotient) j["chi_bar_quotient"] = *chi_bar_quotient;
        if (jm_residual_quotient) j["jm_residual_quotient"] = *jm_residual_quotient;
        return j;
    }
};

// Degree/ends/Euler-characteristic bookkeeping: the closed-cover count
// 2 deg g = -chi + sum(mu_i + 1) and its quotient version over end orbits.
inline TopologyReport topology_check(const WeierstrassData& d, const std::vector<EndInfo>& ends) {
    TopologyReport rep;
    rep.chi_bar = d.chi_double_cover;
    rep.n_ends = int(ends.size());
    rep.deg_g = gauss_degree_numeric(d.domain, d.g);

    int rhs = -rep.chi_bar;
    for (const auto& e : ends) rhs += e.mu + 1;
    rep.jm_residual = 2 * rep.deg_g - rhs;

    rep.parity.deg_even = rep.deg_g % 2 == 0;
    rep.parity.deg_ge_4 = rep.deg_g >= 4;
    rep.parity.chi_mod_4 = ((rep.chi_bar % 4) + 4) % 4 == 0;

    if (d.nonorientable()) {
        rep.chi_bar_quotient = d.chi_quotient;
        std::vector<int> orbit_of(ends.size(), -1);
        for (size_t i = 0; i < ends.size(); ++i) {
            if (orbit_of[i] >= 0) continue;
            PointOnCurve img = apply_involution(d.involution, ends[i].point);
            for (size_t j = 0; j < ends.size(); ++j) {
                if (j == i || orbit_of[j] >= 0) continue;
                if (same_point(img, ends[j].point)) {
                    orbit_of[i] = int(i);
                    orbit_of[j] = int(i);
                    rep.end_orbits.push_back({int(i), int(j)});
                    if (ends[i].mu != ends[j].mu)
                        throw std::runtime_error("paired ends disagree on multiplicity");
                    break;
                }
            }
            if (orbit_of[i] < 0)
                throw std::runtime_error("involution does not pair the ends freely");
        }
        int rhs_q = -d.chi_quotient;
        for (const auto& orb : rep.end_orbits) rhs_q += ends[orb[0]].mu + 1;
        rep.jm_residual_quotient = rep.deg_g - rhs_q;
    }
    return rep;
}

struct RegularityScan {
    double min_density = 0.0;
    SurfacePoint argmin;
    std::vector<PointOnCurve> branch_points;  // common zeros of both weighted forms
    bool immersed = false;
};

// A maxface is immersed iff g phi3 and phi3/g share no zero away from the
// ends; the numeric sample is a sanity floor, the divisor intersection the
// actual decision.
inline RegularityScan regularity_scan(const WeierstrassData& d, int n_samples = 1000) {
    RegularityScan out;
    out.min_density = 1e300;
    for (const SurfacePoint& p : domain_samples(d.domain, n_samples)) {
        double v = regularity_density(d, p);
        if (v < out.min_density) {
            out.min_density = v;
            out.argmin = p;
        }
    }

    FundamentalForms ff = fundamental_forms(d);
    Divisor dg = divisor_of(d.domain, ff.g_phi3, true);
    Divisor dv = divisor_of(d.domain, ff.phi3_over_g, true);
    for (const auto& t1 : dg.terms) {
        if (t1.order <= 0) continue;
        for (const auto& t2 : dv.terms) {
            if (t2.order <= 0) continue;
            if (!same_point(t1.point, t2.point)) continue;
            bool is_end = false;
            for (const auto& e : d.domain.ends())
                if (same_point(t1.point, e)) is_end = true;
            if (!is_end) out.branch_points.push_back(t1.point);
        }
    }
    out.immersed = out.branch_points.empty();
    return out;
}

struct SingularCurve {
    std::vector<SurfacePoint> points;  // polyline in the domain, |g| = 1 on it
    bool closed = false;
};

struct SingularLocusOptions {
    int n_rho = 96;
    int n_theta = 96;
    double rho_min = -2.5;
    double rho_max = 2.5;
    double field_tol = 1e-9;
};

namespace detail {

struct CrossPoint {
    SurfacePoint p;
    double grid_x = 0.0, grid_y = 0.0;  // for chain matching
};

inline cplx logpolar(double rho, double th) { return std::exp(cplx(rho, th)); }

}  // namespace detail

// Marching squares on |g| - 1 over a log-polar grid (both sheets on curves),
// with bisection refinement of every crossing. Cells where the cover has a
// branch point are skipped.
inline std::vector<SingularCurve> singular_locus(const WeierstrassData& d,
                                                 SingularLocusOptions opt = {}) {
    const Domain& dom = d.domain;
    const bool curve = !dom.on_plane();
    const ComplexRational* f = curve ? dom.curve().get() : nullptr;

    double dr = (opt.rho_max - opt.rho_min) / opt.n_rho;
    double dt = 2.0 * M_PI / opt.n_theta;

    struct Seg {
        detail::CrossPoint a, b;
    };
    std::vector<Seg> segs;

    auto field = [&](cplx z, cplx w) { return std::abs(d.g.eval(z, w)) - 1.0; };

    for (int j = 0; j < opt.n_rho; ++j) {
        for (int k = 0; k < opt.n_theta; ++k) {
            double r0 = opt.rho_min + j * dr, r1 = r0 + dr;
            double t0 = k * dt, t1 = t0 + dt;
            // Corner order: (r0,t0) (r1,t0) (r1,t1) (r0,t1).
            std::array<std::pair<double, double>, 4> corner = {
                {{r0, t0}, {r1, t0}, {r1, t1}, {r0, t1}}};
            std::array<cplx, 4> cz;
            for (int c = 0; c < 4; ++c)
                cz[c] = detail::logpolar(corner[c].first, corner[c].second);

            std::array<cplx, 4> cw{};
            if (curve) {
                bool ok = true;
                cw[0] = std::sqrt(f->value_or_throw(cz[0]));
                // Continue w around the cell boundary; a flip at closure means
                // the cell holds a branch point.
                cplx wprev = cw[0];
                for (int c = 1; c <= 4; ++c) {
                    cplx target = cz[c % 4];
                    cplx zprev = cz[c - 1];
                    cplx wcur = wprev;
                    for (int s = 1; s <= 8; ++s) {
                        cplx zs = zprev + (target - zprev) * (double(s) / 8.0);
                        cplx wn = nearest_sqrt(f->value_or_throw(zs), wcur);
                        if (std::abs(wn - wcur) >
                            0.35 * (std::abs(wn) + std::abs(wcur)) + 1e-14) {
                            ok = false;
                            break;
                        }
                        wcur = wn;
                    }
                    if (!ok) break;
                    if (c < 4)
                        cw[c] = wcur;
                    else if (std::abs(wcur - cw[0]) > std::abs(wcur + cw[0]))
                        ok = false;  // odd monodromy: branch point inside
                    wprev = wcur;
                }
                if (!ok) continue;
            }

            int n_sheets = curve ? 2 : 1;
            for (int sheet = 0; sheet < n_sheets; ++sheet) {
                double sgn = sheet == 0 ? 1.0 : -1.0;
                std::array<double, 4> fv;
                bool bad = false;
                for (int c = 0; c < 4; ++c) {
                    try {
                        fv[c] = field(cz[c], sgn * cw[c]);
                    } catch (const std::runtime_error&) {
                        bad = true;
                        break;
                    }
                }
                if (bad) continue;

                std::vector<detail::CrossPoint> hits;
                for (int c = 0; c < 4; ++c) {
                    int c2 = (c + 1) % 4;
                    if ((fv[c] < 0) == (fv[c2] < 0)) continue;
                    // Bisection along the grid edge, w continued from corner c.
                    double lo = 0.0, hi = 1.0;
                    auto at = [&](double t) {
                        double rr = corner[c].first + (corner[c2].first - corner[c].first) * t;
                        double tt =
                            corner[c].second + (corner[c2].second - corner[c].second) * t;
                        return detail::logpolar(rr, tt);
                    };
                    cplx wlo = curve ? sgn * cw[c] : cplx(0.0);
                    double flo = fv[c];
                    cplx zmid = at(0.5);
                    cplx wmid = wlo;
                    for (int it = 0; it < 80; ++it) {
                        double mid = 0.5 * (lo + hi);
                        zmid = at(mid);
                        wmid = curve ? nearest_sqrt(f->value_or_throw(zmid), wlo) : cplx(0.0);
                        double fm = field(zmid, wmid);
                        if (std::abs(fm) <= opt.field_tol) break;
                        if ((fm < 0) == (flo < 0)) {
                            lo = mid;
                            flo = fm;
                            wlo = wmid;
                        } else {
                            hi = mid;
                        }
                    }
                    detail::CrossPoint cp;
                    cp.p = {zmid, wmid};
                    cp.grid_x = zmid.real();
                    cp.grid_y = zmid.imag();
                    hits.push_back(cp);
                }
                for (size_t a = 0; a + 1 < hits.size(); a += 2)
                    segs.push_back({hits[a], hits[a + 1]});
            }
        }
    }

    // Greedy chaining of segments into polylines by endpoint proximity on the
    // same sheet.
    auto near = [&](const detail::CrossPoint& a, const detail::CrossPoint& b) {
        double zt = 1e-6 * (1.0 + std::abs(a.p.z));
        if (std::abs(a.p.z - b.p.z) > zt) return false;
        if (!curve) return true;
        return std::abs(a.p.w - b.p.w) <= std::abs(a.p.w + b.p.w);
    };

    std::vector<SingularCurve> out;
    std::vector<bool> used(segs.size(), false);
    for (size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<detail::CrossPoint> chain{segs[i].a, segs[i].b};
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < segs.size(); ++j) {
                if (used[j]) continue;
                if (near(chain.back(), segs[j].a)) {
                    chain.push_back(segs[j].b);
                } else if (near(chain.back(), segs[j].b)) {
                    chain.push_back(segs[j].a);
                } else if (near(chain.front(), segs[j].a)) {
                    chain.insert(chain.begin(), segs[j].b);
                } else if (near(chain.front(), segs[j].b)) {
                    chain.insert(chain.begin(), segs[j].a);
                } else {
                    continue;
                }
                used[j] = true;
                grew = true;
            }
        }
        SingularCurve sc;
        for (const auto& cp : chain) sc.points.push_back(cp.p);
        sc.closed = near(chain.front(), chain.back());
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace maxface
