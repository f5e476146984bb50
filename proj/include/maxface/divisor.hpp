#pragma once

#include "surface.hpp"

namespace maxface {

struct OrderOptions {
    double radius_factor = 0.25;
    int initial_samples = 1 << 10;
    int max_samples = 1 << 18;
    int max_shrinks = 6;
};

namespace detail {

// Winding number of F around a circle |z - c| = rho (or |z| = R for the point
// at infinity), with w continued along the circle; turns is 1 or 2.
struct WindingProbe {
    const Domain& dom;
    const CurveFunction& F;
    bool around_infinity;
    cplx center;
    double radius;
    int turns;
    std::optional<cplx> w_seed;

    // Returns the winding count; throws after the retry budget is spent.
    int run(const OrderOptions& opt) const {
        double rho = radius;
        for (int shrink = 0; shrink <= opt.max_shrinks; ++shrink) {
            for (int n = opt.initial_samples; n <= opt.max_samples; n *= 2) {
                auto res = attempt(rho, n);
                if (res) return *res;
            }
            rho = around_infinity ? rho * 2.0 : rho * 0.6;
        }
        throw std::runtime_error("winding count did not stabilize");
    }

private:
    std::optional<int> attempt(double rho, int n) const {
        const bool curve = !dom.on_plane();
        const ComplexRational* f = curve ? dom.curve().get() : nullptr;

        auto zpt = [&](double th) {
            return around_infinity ? cplx(rho * std::cos(th), rho * std::sin(th))
                                   : center + cplx(rho * std::cos(th), rho * std::sin(th));
        };

        double span = 2.0 * M_PI * turns;
        cplx w{0.0};
        if (curve) {
            cplx f0 = f->value_or_throw(zpt(0.0));
            w = w_seed ? nearest_sqrt(f0, *w_seed) : std::sqrt(f0);
        }

        double total = 0.0;
        cplx v_prev{0.0};
        for (int j = 0; j <= n; ++j) {
            double th = span * double(j) / n;
            cplx z = zpt(th);
            if (curve && j > 0) {
                cplx wn = nearest_sqrt(f->value_or_throw(z), w);
                if (std::abs(wn - w) > 0.35 * (std::abs(wn) + std::abs(w)) + 1e-14)
                    return std::nullopt;  // step too coarse for the lift
                w = wn;
            }
            cplx v;
            try {
                v = F.eval(z, w);
            } catch (const std::runtime_error&) {
                return std::nullopt;  // hit a coefficient pole on the circle
            }
            if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v))) return std::nullopt;
            if (j > 0) {
                double step = std::arg(v / v_prev);
                if (std::abs(step) > 2.5) return std::nullopt;
                total += step;
            }
            v_prev = v;
        }
        double winding = total / (2.0 * M_PI);
        double rounded = std::round(winding);
        if (std::abs(winding - rounded) > 0.05) return std::nullopt;
        return int(rounded);
    }
};

inline double isolation_radius(const Domain& dom, cplx z0) {
    double iso = 1e300;
    for (cplx sp : dom.finite_special_points()) {
        double d = std::abs(sp - z0);
        if (d > 1e-9 * (1.0 + std::abs(z0))) iso = std::min(iso, d);
    }
    for (const auto& e : dom.ends())
        if (e.zk == ZKind::finite) {
            double d = std::abs(e.z - z0);
            if (d > 1e-9 * (1.0 + std::abs(z0))) iso = std::min(iso, d);
        }
    if (iso >= 1e300) iso = 1.0;
    return iso;
}

inline double outer_radius(const Domain& dom) {
    double m = 1.0;
    for (cplx sp : dom.finite_special_points()) m = std::max(m, std::abs(sp));
    for (const auto& e : dom.ends())
        if (e.zk == ZKind::finite) m = std::max(m, std::abs(e.z));
    return 4.0 * m;
}

}  // namespace detail

// Vanishing order of F (or of the 1-form F dz when as_form) at a point of the
// compactified domain, computed by winding counts in the right local chart.
inline int order_at(const Domain& dom, const CurveFunction& F, const PointOnCurve& p,
                    bool as_form = false, OrderOptions opt = {}) {
    if (F.is_zero()) throw std::invalid_argument("order of the zero function");

    const bool curve = !dom.on_plane();
    if (p.zk == ZKind::infinity) {
        bool branch = curve && dom.branch_at_infinity();
        if (curve && !branch)
            throw std::invalid_argument(
                "order at a non-branch point over infinity is not supported");
        int turns = branch ? 2 : 1;
        detail::WindingProbe probe{dom, F, true, 0.0, detail::outer_radius(dom), turns, {}};
        int w = probe.run(opt);
        int ord = -w;
        if (as_form) ord += branch ? -3 : -2;
        return ord;
    }

    int forder = curve ? dom.curve_order(p.z) : 0;
    bool branch = curve && (std::abs(forder) % 2 == 1);
    double rho = opt.radius_factor * detail::isolation_radius(dom, p.z);

    if (!curve || branch) {
        int turns = branch ? 2 : 1;
        detail::WindingProbe probe{dom, F, false, p.z, rho, turns, {}};
        int ord = probe.run(opt);
        if (as_form) ord += branch ? 1 : 0;
        return ord;
    }

    // Finite point off the branch set: two sheets, pick by the stored w.
    if (p.wk != WKind::finite)
        throw std::invalid_argument("point off the branch set needs a finite w sheet");
    detail::WindingProbe probe{dom, F, false, p.z, rho, 1, p.w};
    return probe.run(opt) + 0;
}

struct DivisorTerm {
    PointOnCurve point;
    int order = 0;
};

struct Divisor {
    std::vector<DivisorTerm> terms;

    int total() const {
        int s = 0;
        for (const auto& t : terms) s += t.order;
        return s;
    }
    int pole_count() const {
        int s = 0;
        for (const auto& t : terms)
            if (t.order < 0) s -= t.order;
        return s;
    }
};

// Zeros and poles of F (as a function, or of F dz when as_form), found from
// the norm a^2 - b^2 f and coefficient poles, with orders confirmed by winding.
inline Divisor divisor_of(const Domain& dom, const CurveFunction& F, bool as_form = false,
                          OrderOptions opt = {}) {
    if (F.is_zero()) throw std::invalid_argument("divisor of the zero function");
    Divisor div;

    auto add_candidate_z = [](std::vector<cplx>& zs, cplx z) {
        for (cplx e : zs)
            if (std::abs(e - z) <= 1e-6 * (1.0 + std::abs(z))) return;
        zs.push_back(z);
    };

    std::vector<cplx> zs;
    auto collect = [&](const Poly& p) {
        if (p.degree() < 1) return;
        for (const auto& cl : cluster_roots(poly_roots(p))) add_candidate_z(zs, cl.center);
    };

    if (dom.on_plane()) {
        collect(F.a.num());
        collect(F.a.den());
        for (cplx z : zs) {
            int ord = order_at(dom, F, PointOnCurve::plane(z), as_form, opt);
            if (ord != 0) div.terms.push_back({PointOnCurve::plane(z), ord});
        }
        int ord_inf = order_at(dom, F, PointOnCurve::plane_infinity(), as_form, opt);
        if (ord_inf != 0) div.terms.push_back({PointOnCurve::plane_infinity(), ord_inf});
        return div;
    }

    const ComplexRational& f = *dom.curve();
    ComplexRational norm = F.a * F.a - F.b * F.b * f;
    if (!norm.is_zero()) {
        collect(norm.num());
        collect(norm.den());
    }
    collect(F.a.den());
    collect(F.b.den());
    collect(f.num());
    collect(f.den());

    for (cplx z : zs) {
        int forder = dom.curve_order(z);
        if (std::abs(forder) % 2 == 1) {
            PointOnCurve p = (forder > 0) ? PointOnCurve::curve(z, 0.0)
                                          : PointOnCurve::curve_w_infinite(z);
            int ord = order_at(dom, F, p, as_form, opt);
            if (ord != 0) div.terms.push_back({p, ord});
        } else {
            cplx w0 = std::sqrt(f.value_or_throw(z));
            for (cplx ws : {w0, -w0}) {
                PointOnCurve p = PointOnCurve::curve(z, ws);
                int ord = order_at(dom, F, p, as_form, opt);
                if (ord != 0) div.terms.push_back({p, ord});
            }
        }
    }

    if (!dom.branch_at_infinity())
        throw std::invalid_argument(
            "divisor over a non-branch infinity on a curve is not supported");
    int m = dom.curve_order_infinity();
    PointOnCurve pinf = PointOnCurve::curve_infinity(m > 0 ? WKind::finite : WKind::infinite);
    int ord_inf = order_at(dom, F, pinf, as_form, opt);
    if (ord_inf != 0) div.terms.push_back({pinf, ord_inf});
    return div;
}

// Degree of F as a map to the sphere: pole count of its function divisor.
inline int degree_of(const Domain& dom, const CurveFunction& F, OrderOptions opt = {}) {
    if (dom.on_plane()) return F.a.map_degree();
    return divisor_of(dom, F, false, opt).pole_count();
}

}  // namespace maxface
