#pragma once

#include "weierstrass.hpp"

namespace maxface {

// Line integral of the 1-form F dz along a lifted path.
inline IntegralValue integrate_form(const LiftedPath& lp, const CurveFunction& form,
                                    const QuadratureConfig& cfg = {}) {
    IntegralValue total;
    for (size_t k = 0; k < lp.spec.segments.size(); ++k) {
        const Segment& seg = lp.spec.segments[k];
        auto piece = integrate_gk(
            [&](double u) {
                cplx z = seg.point(u);
                cplx w = lp.w_at(double(k) + u);
                return form.eval(z, w) * seg.velocity(u);
            },
            0.0, 1.0, cfg);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.max_abs_integrand = std::max(total.max_abs_integrand, piece.max_abs_integrand);
        total.panels += piece.panels;
    }
    return total;
}

// Integral of F dz along the image of a lifted path under an antiholomorphic
// involution, using I(z) = A(conj z) and w -> -1/conj(w).
inline IntegralValue integrate_form_on_image(const LiftedPath& lp, const InvolutionSpec& inv,
                                             const CurveFunction& form,
                                             const QuadratureConfig& cfg = {}) {
    if (inv.trivial()) return integrate_form(lp, form, cfg);
    IntegralValue total;
    for (size_t k = 0; k < lp.spec.segments.size(); ++k) {
        const Segment& seg = lp.spec.segments[k];
        auto piece = integrate_gk(
            [&](double u) {
                cplx z = seg.point(u);
                cplx v = seg.velocity(u);
                SurfacePoint img = apply_involution(inv, {z, lp.w_at(double(k) + u)});
                cplx dimg = antiholomorphic_chart_derivative(inv, z) * std::conj(v);
                return form.eval(img.z, img.w) * dimg;
            },
            0.0, 1.0, cfg);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.max_abs_integrand = std::max(total.max_abs_integrand, piece.max_abs_integrand);
        total.panels += piece.panels;
    }
    return total;
}

// Residue of F dz at a point, via a small contour divided by 2 pi i. Branch
// points need a double turn; at infinity the orientation reverses.
inline cplx residue_at(const Domain& dom, const CurveFunction& form, const PointOnCurve& p,
                       const QuadratureConfig& cfg = {}) {
    bool curve = !dom.on_plane();
    PathSpec spec;
    LiftOptions lopt;
    lopt.init_samples = 128;
    bool at_inf = p.zk == ZKind::infinity;
    bool branch = curve && dom.is_branch_point(p);

    if (at_inf) {
        if (curve && !branch)
            throw std::invalid_argument("residue over a non-branch infinity is not supported");
        double R = detail::outer_radius(dom);
        spec.segments = {Segment::arc(0.0, R, R, 0.0, (branch ? 4.0 : 2.0) * M_PI)};
    } else {
        double rho = 0.4 * detail::isolation_radius(dom, p.z);
        spec.segments = {Segment::arc(p.z, rho, rho, 0.0, (branch ? 4.0 : 2.0) * M_PI)};
        if (curve && !branch) {
            if (p.wk != WKind::finite)
                throw std::invalid_argument("residue needs a sheet at a two-sheet point");
            lopt.start_w = nearest_sqrt(dom.curve()->value_or_throw(p.z + rho), p.w);
        }
        lopt.clearance_rel = 1e-6;  // the loop legitimately hugs this point
    }

    LiftedPath lp = lift_path(dom, spec, lopt);
    if (!lp.closed_z || (curve && lp.w_flipped))
        throw std::runtime_error("residue contour did not close on the curve");
    IntegralValue iv = integrate_form(lp, form, cfg);
    cplx res = iv.value / cplx(0.0, 2.0 * M_PI);
    return at_inf ? -res : res;
}

struct HomologyAction {
    std::vector<std::vector<int>> matrix;  // column j = class of the image of loop j
    double residual = 0.0;                 // worst gap after integer rounding
};

// Integer matrix of an involution on the span of the canonical loops, read off
// from periods of the probe form dz/w (curve) or dz/(z - p) sums (plane).
inline HomologyAction involution_on_homology(const Domain& dom, const InvolutionSpec& inv,
                                             const std::vector<CanonicalLoop>& loops,
                                             const QuadratureConfig& cfg = {}) {
    if (loops.size() != 2)
        throw std::invalid_argument("homology action is implemented for rank two");
    CurveFunction probe;
    if (dom.on_plane())
        throw std::invalid_argument("homology action on plane domains is not needed");
    // dz/w = (w/f) dz.
    probe = CurveFunction::on_curve(dom.curve(), ComplexRational::zero(),
                                    ComplexRational::constant(1.0) / (*dom.curve()));

    std::array<LiftedPath, 2> lifted = {lift_path(dom, loops[0].path, {}),
                                        lift_path(dom, loops[1].path, {})};
    std::array<cplx, 2> base;
    for (int i = 0; i < 2; ++i) {
        if (!lifted[i].closed_z || lifted[i].w_flipped)
            throw std::runtime_error("canonical loop is not closed on the curve");
        base[i] = integrate_form(lifted[i], probe, cfg).value;
    }

    double det = base[0].real() * base[1].imag() - base[1].real() * base[0].imag();
    if (std::abs(det) < 1e-12)
        throw std::runtime_error("probe periods are degenerate over the loop basis");

    HomologyAction act;
    act.matrix.assign(2, std::vector<int>(2, 0));
    for (int j = 0; j < 2; ++j) {
        cplx q = integrate_form_on_image(lifted[j], inv, probe, cfg).value;
        double m0 = (q.real() * base[1].imag() - base[1].real() * q.imag()) / det;
        double m1 = (base[0].real() * q.imag() - q.real() * base[0].imag()) / det;
        act.residual = std::max({act.residual, std::abs(m0 - std::round(m0)),
                                 std::abs(m1 - std::round(m1))});
        act.matrix[0][j] = int(std::round(m0));
        act.matrix[1][j] = int(std::round(m1));
    }
    if (act.residual > 1e-6)
        throw std::runtime_error("homology action did not round to integers");
    return act;
}

struct LoopPeriods {
    std::string name;
    cplx period_g_phi3{0.0};
    cplx period_phi3_over_g{0.0};
    cplx period_phi3{0.0};
    cplx horizontal{0.0};  // period of g phi3 plus conjugate period of phi3/g
    double vertical = 0.0;  // real part of the phi3 period
    double tol = 0.0;
    bool ok = false;
};

struct EndResidues {
    std::string where;
    cplx res_g_phi3{0.0};
    cplx res_phi3_over_g{0.0};
    cplx res_phi3{0.0};
    cplx horizontal{0.0};
    double vertical = 0.0;
    double tol = 0.0;
    bool ok = false;
};

struct PeriodReport {
    std::vector<LoopPeriods> loops;
    std::vector<EndResidues> ends;
    bool well_defined = false;

    nlohmann::json to_json() const {
        nlohmann::json j;
        auto put_c = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
        j["loops"] = nlohmann::json::array();
        for (const auto& L : loops) {
            j["loops"].push_back({{"name", L.name},
                                  {"period_g_phi3", put_c(L.period_g_phi3)},
                                  {"period_phi3_over_g", put_c(L.period_phi3_over_g)},
                                  {"period_phi3", put_c(L.period_phi3)},
                                  {"horizontal", put_c(L.horizontal)},
                                  {"vertical", L.vertical},
                                  {"tol", L.tol},
                                  {"ok", L.ok}});
        }
        j["ends"] = nlohmann::json::array();
        for (const auto& E : ends) {
            j["ends"].push_back({{"where", E.where},
                                 {"res_g_phi3", put_c(E.res_g_phi3)},
                                 {"res_phi3_over_g", put_c(E.res_phi3_over_g)},
                                 {"res_phi3", put_c(E.res_phi3)},
                                 {"horizontal", put_c(E.horizontal)},
                                 {"vertical", E.vertical},
                                 {"tol", E.tol},
                                 {"ok", E.ok}});
        }
        j["well_defined"] = well_defined;
        return j;
    }
};

// Evaluates both closing conditions, horizontal and vertical, over the
// canonical loops and the loops around ends; tolerances scale with the loop
// length and the largest integrand magnitude seen.
inline PeriodReport period_report(const WeierstrassData& d, const QuadratureConfig& cfg = {}) {
    PeriodReport rep;
    FundamentalForms ff = fundamental_forms(d);
    const Domain& dom = d.domain;

    for (const CanonicalLoop& cl : canonical_loops(dom)) {
        LiftOptions lopt;
        lopt.init_samples = 256;
        LiftedPath lp = lift_path(dom, cl.path, lopt);
        if (!lp.closed_z || lp.w_flipped)
            throw std::runtime_error("canonical loop does not close on the curve");

        LoopPeriods L;
        L.name = cl.name;
        auto a = integrate_form(lp, ff.g_phi3, cfg);
        auto b = integrate_form(lp, ff.phi3_over_g, cfg);
        auto c = integrate_form(lp, d.phi3, cfg);
        L.period_g_phi3 = a.value;
        L.period_phi3_over_g = b.value;
        L.period_phi3 = c.value;
        L.horizontal = a.value + std::conj(b.value);
        L.vertical = c.value.real();
        double len = cl.path.total_length_estimate();
        double mx = std::max({a.max_abs_integrand, b.max_abs_integrand, c.max_abs_integrand});
        L.tol = 1e-8 * (1.0 + len * mx);
        L.ok = std::abs(L.horizontal) <= L.tol && std::abs(L.vertical) <= L.tol;
        rep.loops.push_back(std::move(L));
    }

    for (const PointOnCurve& e : dom.ends()) {
        EndResidues E;
        E.where = e.describe();
        E.res_g_phi3 = residue_at(dom, ff.g_phi3, e, cfg);
        E.res_phi3_over_g = residue_at(dom, ff.phi3_over_g, e, cfg);
        E.res_phi3 = residue_at(dom, d.phi3, e, cfg);
        cplx tau(0.0, 2.0 * M_PI);
        cplx pg = tau * E.res_g_phi3;
        cplx pv = tau * E.res_phi3_over_g;
        cplx p3 = tau * E.res_phi3;
        E.horizontal = pg + std::conj(pv);
        E.vertical = p3.real();
        double scale =
            std::max({std::abs(pg), std::abs(pv), std::abs(p3), 1.0});
        E.tol = 1e-8 * scale;
        E.ok = std::abs(E.horizontal) <= E.tol && std::abs(E.vertical) <= E.tol;
        rep.ends.push_back(std::move(E));
    }

    rep.well_defined = true;
    for (const auto& L : rep.loops) rep.well_defined = rep.well_defined && L.ok;
    for (const auto& E : rep.ends) rep.well_defined = rep.well_defined && E.ok;
    return rep;
}

// Collapses a loop hugging the branch cut [alpha, beta] onto the cut: for a
// w-odd integrand the two sides add, giving -2 int_alpha^beta rho(x) w_top(x) dx.
// An exact piece d(s w) may be folded in to cancel endpoint divergences; it
// shifts the integrand without changing the contour value.
inline IntegralValue regularized_cut_integral(const Domain& dom, const CurveFunction& form,
                                              const ComplexRational& correction_s,
                                              double alpha, double beta,
                                              const QuadratureConfig& cfg = {}) {
    if (dom.on_plane()) throw std::invalid_argument("cut collapse needs a curve domain");
    if (!form.a.is_zero())
        throw std::invalid_argument("cut collapse applies to w-odd integrands");
    const ComplexRational& f = *dom.curve();

    ComplexRational rho_total = form.b;
    if (!correction_s.is_zero())
        rho_total = rho_total + correction_s.derivative() +
                    correction_s * f.derivative() / (f * cplx(2.0));

    // Side of the cut the canonical loop starts on: continue w from the
    // rightmost vertex to just above the midpoint.
    double len = beta - alpha;
    double guard = 1e300;
    for (cplx q : dom.finite_special_points()) {
        if (std::abs(q - cplx(alpha)) < 1e-9 * (1.0 + std::abs(q))) continue;
        if (std::abs(q - cplx(beta)) < 1e-9 * (1.0 + std::abs(q))) continue;
        double dx = 0.0;
        if (q.real() < alpha)
            dx = alpha - q.real();
        else if (q.real() > beta)
            dx = q.real() - beta;
        guard = std::min(guard, std::hypot(dx, q.imag()));
    }
    double margin = std::min(0.1 * len, 0.5 * guard);
    double rx = 0.5 * len + margin;
    double ry = 0.5 * rx;
    double mid = 0.5 * (alpha + beta);
    double delta = 1e-6 * len;

    PathSpec approach;
    approach.segments = {Segment::arc(cplx(mid, 0.0), rx, ry, 0.0, 0.5 * M_PI),
                         Segment::line(cplx(mid, ry), cplx(mid, delta))};
    LiftOptions lopt;
    lopt.clearance_rel = 1e-9;  // the vertical leg deliberately lands near the cut
    LiftedPath ap = lift_path(dom, approach, lopt);
    cplx w_mid = ap.end_w();
    cplx u_mid = std::sqrt(f.value_or_throw(cplx(mid, 0.0)));
    double sigma = (std::abs(w_mid - u_mid) <= std::abs(w_mid + u_mid)) ? 1.0 : -1.0;

    auto iv = integrate_gk_sqrt_endpoints(
        [&](double x) {
            cplx u = std::sqrt(f.value_or_throw(cplx(x, 0.0)));
            return rho_total.value_or_throw(cplx(x, 0.0)) * u;
        },
        alpha, beta, cfg);
    iv.value *= -2.0 * sigma;
    return iv;
}

}  // namespace maxface
