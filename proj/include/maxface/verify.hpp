#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "catalog.hpp"
#include "immersion.hpp"

namespace maxface {
namespace verify {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << v;
    return os.str();
}

inline std::string fmtf(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << std::fixed << v;
    return os.str();
}

// Quadrature settings for checks whose tolerances sit within two orders of
// the default integration budget.
inline QuadratureConfig tight_cfg() {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-12;
    return cfg;
}

inline cplx loop_integral(const Domain& dom, const PathSpec& path, const CurveFunction& form,
                          const QuadratureConfig& cfg, int init_samples = 64) {
    LiftOptions lo;
    lo.init_samples = init_samples;
    LiftedPath lp = lift_path(dom, path, lo);
    return integrate_form(lp, form, cfg).value;
}

// Horizontal closing value over one loop: period of g phi3 plus the conjugate
// period of phi3/g.
inline cplx horizontal_value(const WeierstrassData& d, const PathSpec& path,
                             const QuadratureConfig& cfg) {
    FundamentalForms ff = fundamental_forms(d);
    cplx a = loop_integral(d.domain, path, ff.g_phi3, cfg);
    cplx b = loop_integral(d.domain, path, ff.phi3_over_g, cfg);
    return a + std::conj(b);
}

// 4th-order Richardson extrapolation of the central difference of h. The base
// step shrinks with r because h grows like 1/r toward 0.
inline double h_fd_richardson(double r, const QuadratureConfig& cfg) {
    double s = 2e-4 * r;
    auto central = [&](double step) {
        return (klein_h(r + step, cfg) - klein_h(r - step, cfg)) / (2.0 * step);
    };
    double d1 = central(s);
    double d2 = central(0.5 * s);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace detail

inline CriterionResult criterion_1() {
    CriterionResult res{1, "klein-roots", false, ""};
    auto t0 = std::chrono::steady_clock::now();
    RootResult rr = solve_klein();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rr.roots.size() != 2) {
        res.detail = "expected two roots, got " + std::to_string(rr.roots.size());
        return res;
    }
    double r1 = rr.roots[0], r2 = rr.roots[1];
    bool ok1 = std::abs(r1 - 0.17137) <= 5e-4;
    bool ok2 = std::abs(r2 - 0.691724) <= 5e-4;
    res.pass = ok1 && ok2 && secs < 30.0;
    res.detail = "roots " + detail::fmtf(r1, 6) + ", " + detail::fmtf(r2, 6) + " in " +
                 detail::fmtf(secs, 1) + "s";
    return res;
}

inline CriterionResult criterion_2() {
    CriterionResult res{2, "h-gamma-closed-form", false, ""};
    double g34 = std::tgamma(0.75);
    double target =
        -(4.0 * g34 * g34 + std::tgamma(-0.75) * std::tgamma(1.25)) / std::sqrt(2.0 * M_PI);
    double got = klein_h(1.0);
    double rel = std::abs(got - target) / std::abs(target);
    res.pass = rel <= 1e-6;
    res.detail = "h(1) = " + detail::fmtf(got, 12) + ", rel err " + detail::fmt(rel);
    return res;
}

inline CriterionResult criterion_3() {
    CriterionResult res{3, "h-tail-limits", false, ""};
    double hp = klein_h(1000.0);
    double hm = klein_h(-1000.0);
    double ep = std::abs(hp + M_PI);
    double em = std::abs(hm - M_PI);
    res.pass = ep <= 0.01 && em <= 0.01;
    res.detail = "h(1000) = " + detail::fmtf(hp, 6) + ", h(-1000) = " + detail::fmtf(hm, 6);
    return res;
}

inline CriterionResult criterion_4() {
    CriterionResult res{4, "q-root", false, ""};
    double s = klein_q_root();
    double qs = klein_q(s);
    res.pass = std::abs(s - 0.317672) <= 1e-5 && std::abs(qs) <= 1e-10;
    res.detail = "s = " + detail::fmtf(s, 8) + ", q(s) = " + detail::fmt(qs);
    return res;
}

inline CriterionResult criterion_5() {
    CriterionResult res{5, "h-sign-pattern", false, ""};
    double a = klein_h(0.5);
    double b = klein_h(1.0);
    res.pass = a > 0.0 && b < 0.0;
    res.detail = "h(1/2) = " + detail::fmtf(a, 6) + ", h(1) = " + detail::fmtf(b, 6);
    return res;
}

inline CriterionResult criterion_6() {
    CriterionResult res{6, "family-closed-forms", false, ""};
    QuadratureConfig cfg;
    std::mt19937 rng(987654321u);
    std::uniform_real_distribution<double> ur(0.3, 2.0);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    double worst = 0.0;
    int accepted = 0, attempts = 0;
    while (accepted < 10 && attempts < 1000) {
        ++attempts;
        double r = ur(rng);
        cplx s(uc(rng), uc(rng));
        cplx t(uc(rng), uc(rng));
        if (std::abs(s) < 0.15 || std::abs(t) < 0.15) continue;
        cplx W = catalog::moebius_W(r, s, t);
        double S = catalog::moebius_S(r, s, t);
        // keep targets away from zero so the relative comparison is meaningful
        if (std::abs(W) < 0.05 || std::abs(S) < 0.05) continue;
        ++accepted;
        WeierstrassData d = catalog::make_moebius_family({{"r", r}, {"s", s}, {"t", t}});
        PathSpec loop = canonical_loops(d.domain)[0].path;
        cplx A = detail::horizontal_value(d, loop, cfg);
        cplx V = detail::loop_integral(d.domain, loop, d.phi3, cfg);
        cplx tA = catalog::moebius_family_horizontal_closed(r, s, t);
        cplx tV = catalog::moebius_family_vertical_closed(r, s, t);
        worst = std::max(worst, std::abs(A - tA) / std::abs(tA));
        worst = std::max(worst, std::abs(V - tV) / std::abs(tV));
    }
    WeierstrassData sym = catalog::make_moebius_sym();
    PathSpec loop = canonical_loops(sym.domain)[0].path;
    cplx A0 = detail::horizontal_value(sym, loop, cfg);
    cplx V0 = detail::loop_integral(sym.domain, loop, sym.phi3, cfg) / (2.0 * M_PI);
    bool sym_ok = std::abs(A0) <= 1e-10 && std::abs(V0) <= 1e-10;
    res.pass = accepted == 10 && worst <= 1e-8 && sym_ok;
    res.detail = "worst rel err " + detail::fmt(worst) + " over 10 triples; symmetric |A| " +
                 detail::fmt(std::abs(A0)) + ", |V|/2pi " + detail::fmt(std::abs(V0));
    return res;
}

inline CriterionResult criterion_7() {
    CriterionResult res{7, "b2-periods", false, ""};
    QuadratureConfig cfg;
    WeierstrassData d1 = catalog::make_moebius_b2({{"r", 1.0}});
    PeriodReport rep = period_report(d1, cfg);
    double worst = 0.0;
    for (const auto& L : rep.loops)
        worst = std::max({worst, std::abs(L.horizontal), std::abs(L.vertical)});
    for (const auto& E : rep.ends)
        worst = std::max({worst, std::abs(E.horizontal), std::abs(E.vertical)});
    double worst_res = 0.0;
    QuadratureConfig tcfg = detail::tight_cfg();
    for (double r : {0.5, 2.0}) {
        WeierstrassData d = catalog::make_moebius_b2({{"r", r}});
        PathSpec loop = canonical_loops(d.domain)[0].path;
        cplx V = detail::loop_integral(d.domain, loop, d.phi3, tcfg);
        worst_res = std::max(worst_res, std::abs(V - catalog::moebius_b2_vertical_closed(r)));
    }
    res.pass = worst <= 1e-10 && worst_res <= 1e-10;
    res.detail = "r=1 residual " + detail::fmt(worst) + "; vertical closed-form gap " +
                 detail::fmt(worst_res);
    return res;
}

inline CriterionResult criterion_8() {
    CriterionResult res{8, "obstruction-values", false, ""};
    QuadratureConfig cfg;
    WeierstrassData g1 = catalog::make_counter_genus1({});
    PathSpec loop1 = canonical_loops(g1.domain)[0].path;
    cplx A1 = detail::horizontal_value(g1, loop1, cfg);
    cplx t1 = catalog::genus1_horizontal_closed(0.7, 1.0);
    double rel = std::abs(A1 - t1) / std::abs(t1);

    WeierstrassData b1 = catalog::make_counter_moebius_b1({});
    PathSpec loop2 = canonical_loops(b1.domain)[0].path;
    cplx A2 = detail::horizontal_value(b1, loop2, cfg);

    res.pass = std::abs(A1) > 0.1 && std::abs(A2) > 0.1 && rel <= 1e-8;
    res.detail = "|A| genus1 " + detail::fmtf(std::abs(A1), 4) + " (closed-form rel err " +
                 detail::fmt(rel) + "), branch1 " + detail::fmtf(std::abs(A2), 4);
    return res;
}

inline CriterionResult criterion_9() {
    CriterionResult res{9, "topology-suite", false, ""};
    QuadratureConfig cfg;
    std::ostringstream msg;
    bool ok = true;

    std::vector<std::pair<std::string, WeierstrassData>> models;
    models.emplace_back("catenoid", catalog::make_catenoid());
    models.emplace_back("moebius-b2", catalog::make_moebius_b2({}));
    for (int k = 1; k <= 3; ++k)
        models.emplace_back("moebius-k(" + std::to_string(k) + ")",
                            catalog::make_moebius_k({{"k", double(k)}}));
    models.emplace_back("moebius-sym", catalog::make_moebius_sym());
    catalog::KleinRoots kr = catalog::klein_roots(cfg);
    models.emplace_back("klein-1", catalog::make_klein(kr.r1));
    models.emplace_back("klein-2", catalog::make_klein(kr.r2));

    for (auto& [name, d] : models) {
        auto ends = end_analysis(d, cfg);
        TopologyReport topo = topology_check(d, ends);
        if (topo.jm_residual != 0) {
            ok = false;
            msg << name << " degree/topology residual " << topo.jm_residual << "; ";
        }
        if (d.nonorientable()) {
            if (!topo.jm_residual_quotient || *topo.jm_residual_quotient != 0) {
                ok = false;
                msg << name << " quotient residual; ";
            }
            if (topo.deg_g % 2 != 0 || topo.deg_g < 4) {
                ok = false;
                msg << name << " deg " << topo.deg_g << " not even >= 4; ";
            }
        }
    }

    // divisor order table for the first Klein surface, columns
    // (-r, w inf), (0,0), (1/r, 0), (z inf), (1, +-w), (-1, +-w)
    WeierstrassData kd = catalog::make_klein(kr.r1);
    const Domain& dom = kd.domain;
    FundamentalForms ff = fundamental_forms(kd);
    double r = kr.r1;
    cplx w1 = dom.sqrt_fiber(1.0);
    cplx wm1 = dom.sqrt_fiber(-1.0);
    std::vector<PointOnCurve> pts = {
        PointOnCurve::curve_w_infinite(-r),     PointOnCurve::curve(0.0, 0.0),
        PointOnCurve::curve(1.0 / r, 0.0),      PointOnCurve::curve_infinity(WKind::infinite),
        PointOnCurve::curve(1.0, w1),           PointOnCurve::curve(1.0, -w1),
        PointOnCurve::curve(-1.0, wm1),         PointOnCurve::curve(-1.0, -wm1),
    };
    struct Row {
        const CurveFunction* fn;
        bool as_form;
        std::array<int, 8> expect;
        const char* label;
    };
    std::array<Row, 4> rows = {{
        {&kd.g, false, {-1, 1, 1, -1, -1, -1, 1, 1}, "g"},
        {&ff.g_phi3, true, {0, -2, 2, -4, 0, 0, 2, 2}, "g*phi3"},
        {&kd.phi3, true, {1, -3, 1, -3, 1, 1, 1, 1}, "phi3"},
        {&ff.phi3_over_g, true, {2, -4, 0, -2, 2, 2, 0, 0}, "phi3/g"},
    }};
    int checked = 0;
    for (const Row& row : rows) {
        for (size_t i = 0; i < pts.size(); ++i) {
            int got = order_at(dom, *row.fn, pts[i], row.as_form);
            ++checked;
            if (got != row.expect[i]) {
                ok = false;
                msg << row.label << " order at " << pts[i].describe() << " = " << got
                    << ", expected " << row.expect[i] << "; ";
            }
        }
    }

    res.pass = ok;
    res.detail = ok ? "8 models consistent; " + std::to_string(checked) + " divisor orders exact"
                    : msg.str();
    return res;
}

inline CriterionResult criterion_10() {
    CriterionResult res{10, "immersion-invariants", false, ""};
    QuadratureConfig cfg;
    std::ostringstream msg;
    bool ok = true;
    catalog::KleinRoots kr = catalog::klein_roots(cfg);
    for (double r : {kr.r1, kr.r2}) {
        WeierstrassData d = catalog::make_klein(r);
        ImmersionEngine eng = ImmersionEngine::build(d, cfg);
        auto phis = phi_vector(d);

        double worst_conf = 0.0;
        for (const SurfacePoint& p : domain_samples(d.domain, 500)) {
            cplx p1 = phis[0].eval(p.z, p.w);
            cplx p2 = phis[1].eval(p.z, p.w);
            cplx p3 = phis[2].eval(p.z, p.w);
            double num = std::abs(p1 * p1 + p2 * p2 - p3 * p3);
            double den = std::max(1.0, std::norm(p1) + std::norm(p2) + std::norm(p3));
            worst_conf = std::max(worst_conf, num / den);
        }
        if (worst_conf > 1e-12) {
            ok = false;
            msg << "conformality " << detail::fmt(worst_conf) << " at r=" << r << "; ";
        }

        double worst_inv = 0.0;
        for (const SurfacePoint& p : domain_samples(d.domain, 100)) {
            SurfacePoint q = apply_involution(d.involution, p);
            worst_inv = std::max(worst_inv, vec3_dist(eng.evaluate(p), eng.evaluate(q)));
        }
        if (worst_inv > 1e-6) {
            ok = false;
            msg << "involution gap " << detail::fmt(worst_inv) << " at r=" << r << "; ";
        }

        double worst_sym = 0.0;
        for (int which = 0; which < 3; ++which)
            worst_sym = std::max(worst_sym, eng.symmetry_check(which).max_deviation);
        if (worst_sym > 1e-6) {
            ok = false;
            msg << "symmetry deviation " << detail::fmt(worst_sym) << " at r=" << r << "; ";
        }

        MeshOptions mopt;
        SurfaceMesh mesh = eng.sample_mesh(mopt);
        HarmonicityReport hr = harmonicity_check(mesh, d.domain.finite_branch_points());
        if (!hr.ok) {
            ok = false;
            msg << "harmonicity ratio " << detail::fmtf(hr.worst_ratio, 3) << " at r=" << r
                << "; ";
        }
        msg << "r=" << detail::fmtf(r, 5) << ": conf " << detail::fmt(worst_conf) << ", inv "
            << detail::fmt(worst_inv) << ", sym " << detail::fmt(worst_sym) << ", harm ratio "
            << detail::fmtf(hr.worst_ratio, 3) << "; ";
    }
    res.pass = ok;
    res.detail = msg.str();
    return res;
}

inline CriterionResult criterion_11() {
    CriterionResult res{11, "property-suites", false, ""};
    QuadratureConfig cfg;
    std::ostringstream msg;
    bool ok = true;
    catalog::KleinRoots kr = catalog::klein_roots(cfg);

    // residue sums over all poles of each fundamental form
    double worst_res = 0.0;
    {
        WeierstrassData d = catalog::make_klein(kr.r1);
        FundamentalForms ff = fundamental_forms(d);
        PointOnCurve p0 = PointOnCurve::curve(0.0, 0.0);
        PointOnCurve pinf = PointOnCurve::curve_infinity(WKind::infinite);
        for (const CurveFunction* form : {&ff.g_phi3, &ff.phi3_over_g, &d.phi3}) {
            cplx sum = residue_at(d.domain, *form, p0, cfg) + residue_at(d.domain, *form, pinf, cfg);
            worst_res = std::max(worst_res, std::abs(sum));
        }
        WeierstrassData b2 = catalog::make_moebius_b2({{"r", 2.0}});
        cplx sum = residue_at(b2.domain, b2.phi3, PointOnCurve::plane(0.0), cfg) +
                   residue_at(b2.domain, b2.phi3, PointOnCurve::plane_infinity(), cfg);
        worst_res = std::max(worst_res, std::abs(sum));
    }
    if (worst_res > 1e-9) {
        ok = false;
        msg << "residue sum " << detail::fmt(worst_res) << "; ";
    }

    // homotopy invariance: the same loop as one arc sweep versus a refined
    // segmentation, lifted at different sampling densities
    double worst_hom = 0.0;
    for (double r : {kr.r1, kr.r2}) {
        WeierstrassData d = catalog::make_klein(r);
        FundamentalForms ff = fundamental_forms(d);
        auto loops = canonical_loops(d.domain);
        const ComplexRational& f = *d.domain.curve();
        CurveFunction probe = CurveFunction::on_curve(
            d.domain.curve(), ComplexRational::zero(),
            ComplexRational::constant(1.0) / f);
        for (const CanonicalLoop& cl : loops) {
            PathSpec refined;
            for (const Segment& s : cl.path.segments) {
                if (s.kind == Segment::Kind::arc) {
                    for (int q = 0; q < 4; ++q) {
                        double u0 = s.t0 + (s.t1 - s.t0) * q / 4.0;
                        double u1 = s.t0 + (s.t1 - s.t0) * (q + 1) / 4.0;
                        refined.segments.push_back(Segment::arc(s.center, s.rx, s.ry, u0, u1));
                    }
                } else {
                    cplx mid = 0.5 * (s.a + s.b);
                    refined.segments.push_back(Segment::line(s.a, mid));
                    refined.segments.push_back(Segment::line(mid, s.b));
                }
            }
            for (const CurveFunction* form : {&ff.g_phi3, &probe}) {
                cplx v1 = detail::loop_integral(d.domain, cl.path, *form, cfg, 64);
                cplx v2 = detail::loop_integral(d.domain, refined, *form, cfg, 256);
                worst_hom = std::max(worst_hom, std::abs(v1 - v2));
            }
        }
    }
    if (worst_hom > 1e-9) {
        ok = false;
        msg << "homotopy gap " << detail::fmt(worst_hom) << "; ";
    }

    // monodromy parity of random circles against the count of enclosed branch
    // points
    int parity_fail = 0, accepted = 0, attempts = 0;
    {
        WeierstrassData d = catalog::make_klein(kr.r1);
        auto branches = d.domain.finite_branch_points();
        std::mt19937 rng(424242u);
        std::uniform_real_distribution<double> uc(-2.5, 2.5), urad(0.3, 2.0);
        while (accepted < 100 && attempts < 10000) {
            ++attempts;
            cplx c(uc(rng), uc(rng));
            double rad = urad(rng);
            bool clear = true;
            int enclosed = 0;
            for (cplx b : branches) {
                double dist = std::abs(b - c);
                if (std::abs(dist - rad) < 0.08) clear = false;
                if (dist < rad) ++enclosed;
            }
            if (!clear) continue;
            ++accepted;
            PathSpec circle;
            circle.segments.push_back(Segment::arc(c, rad, rad, 0.0, 2.0 * M_PI));
            LiftOptions lo;
            lo.init_samples = 128;
            LiftedPath lp = lift_path(d.domain, circle, lo);
            if (lp.w_flipped != (enclosed % 2 == 1)) ++parity_fail;
        }
    }
    if (accepted != 100 || parity_fail != 0) {
        ok = false;
        msg << "monodromy parity failures " << parity_fail << "/" << accepted << "; ";
    }

    // h decomposition and derivative consistency on a 50-point grid in (0,1)
    QuadratureConfig tcfg;
    tcfg.abs_tol = 1e-13;
    tcfg.rel_tol = 3e-12;
    double worst_dec = 0.0, worst_fd = 0.0;
    for (int i = 1; i <= 50; ++i) {
        double r = double(i) / 51.0;
        double a1 = klein_A1(r, tcfg);
        double a2 = klein_A2(r, tcfg);
        double dec = klein_h(r, tcfg) +
                     2.0 * ((3.0 * r * r - 3.0 * r + 1.0) * a1 + (r - 1.0) * (r * r + 1.0) * a2);
        worst_dec = std::max(worst_dec, std::abs(dec));
        double fd = detail::h_fd_richardson(r, tcfg);
        worst_fd = std::max(worst_fd, std::abs(klein_h_prime(r, tcfg) - fd));
    }
    if (worst_dec > 1e-8) {
        ok = false;
        msg << "decomposition gap " << detail::fmt(worst_dec) << "; ";
    }
    if (worst_fd > 1e-4) {
        ok = false;
        msg << "derivative gap " << detail::fmt(worst_fd) << "; ";
    }

    res.pass = ok;
    msg << "residue " << detail::fmt(worst_res) << ", homotopy " << detail::fmt(worst_hom)
        << ", parity " << parity_fail << "/" << accepted << ", decomposition "
        << detail::fmt(worst_dec) << ", derivative " << detail::fmt(worst_fd);
    res.detail = msg.str();
    return res;
}

using Runner = CriterionResult (*)();

inline const std::array<Runner, 11>& runners() {
    static const std::array<Runner, 11> r = {criterion_1, criterion_2, criterion_3, criterion_4,
                                             criterion_5, criterion_6, criterion_7, criterion_8,
                                             criterion_9, criterion_10, criterion_11};
    return r;
}

inline CriterionResult run_one(int index) {
    try {
        return runners().at(size_t(index - 1))();
    } catch (const std::exception& e) {
        return {index, "criterion", false, std::string("exception: ") + e.what()};
    }
}

inline std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= int(runners().size()); ++i) out.push_back(run_one(i));
    return out;
}

}  // namespace verify
}  // namespace maxface
