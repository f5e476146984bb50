#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "algebra.hpp"
#include "quadrature.hpp"

namespace maxface {

struct PathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ZKind { finite, infinity };
enum class WKind { none, finite, infinite };

// A point of the compactified domain: either of the plane/sphere (no w) or of
// the double cover w^2 = f(z).
struct PointOnCurve {
    ZKind zk = ZKind::finite;
    cplx z{0.0};
    WKind wk = WKind::none;
    cplx w{0.0};

    static PointOnCurve plane(cplx z0) { return {ZKind::finite, z0, WKind::none, 0.0}; }
    static PointOnCurve plane_infinity() { return {ZKind::infinity, 0.0, WKind::none, 0.0}; }
    static PointOnCurve curve(cplx z0, cplx w0) { return {ZKind::finite, z0, WKind::finite, w0}; }
    static PointOnCurve curve_w_infinite(cplx z0) {
        return {ZKind::finite, z0, WKind::infinite, 0.0};
    }
    static PointOnCurve curve_infinity(WKind wkind, cplx w0 = 0.0) {
        return {ZKind::infinity, 0.0, wkind, w0};
    }

    bool z_finite() const { return zk == ZKind::finite; }

    std::string describe() const {
        std::ostringstream os;
        os.precision(12);
        if (zk == ZKind::infinity)
            os << "z=inf";
        else
            os << "z=(" << z.real() << "," << z.imag() << ")";
        if (wk == WKind::infinite)
            os << ", w=inf";
        else if (wk == WKind::finite)
            os << ", w=(" << w.real() << "," << w.imag() << ")";
        return os.str();
    }
};

inline double chordal_distance(cplx a, cplx b) {
    return 2.0 * std::abs(a - b) /
           std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

inline bool same_point(const PointOnCurve& p, const PointOnCurve& q, double tol = 1e-7) {
    if (p.zk != q.zk) return false;
    if (p.zk == ZKind::finite && chordal_distance(p.z, q.z) > tol) return false;
    if (p.wk == WKind::none || q.wk == WKind::none) return p.wk == q.wk;
    if ((p.wk == WKind::infinite) != (q.wk == WKind::infinite)) return false;
    if (p.wk == WKind::finite && chordal_distance(p.w, q.w) > tol) return false;
    return true;
}

struct SurfacePoint {
    cplx z{0.0};
    cplx w{0.0};  // ignored on plane domains
};

// Conformal domain a Weierstrass pair lives on: the plane/sphere minus ends,
// or the hyperelliptic curve w^2 = f(z) minus ends.
class Domain {
public:
    enum class Kind { plane, curve };

    static Domain punctured_plane(std::vector<PointOnCurve> ends) {
        Domain d;
        d.kind_ = Kind::plane;
        d.ends_ = std::move(ends);
        return d;
    }

    static Domain hyperelliptic(ComplexRational f, std::vector<PointOnCurve> ends) {
        Domain d;
        d.kind_ = Kind::curve;
        d.f_ = std::make_shared<const ComplexRational>(std::move(f));
        d.ends_ = std::move(ends);
        d.analyze_curve();
        return d;
    }

    Kind kind() const { return kind_; }
    bool on_plane() const { return kind_ == Kind::plane; }
    const std::shared_ptr<const ComplexRational>& curve() const { return f_; }
    const std::vector<PointOnCurve>& ends() const { return ends_; }
    const std::vector<cplx>& finite_branch_points() const { return branch_; }
    bool branch_at_infinity() const { return branch_inf_; }
    const std::vector<cplx>& w_poles() const { return w_poles_; }

    // Order of f at a finite point (0 off the zero/pole set); odd means branch.
    int curve_order(cplx z0) const {
        if (!f_) return 0;
        return clustered_order(z0);
    }
    int curve_order_infinity() const {
        if (!f_) return 0;
        return f_->order_at_infinity();
    }
    bool is_branch_point(const PointOnCurve& p) const {
        if (!f_) return false;
        if (p.zk == ZKind::infinity) return branch_inf_;
        return std::abs(curve_order(p.z)) % 2 == 1;
    }

    // Finite points a path must keep clear of: branch points, poles of f, and
    // finite projections of ends.
    std::vector<cplx> finite_special_points() const {
        std::vector<cplx> pts = branch_;
        for (cplx p : w_poles_) pts.push_back(p);
        for (const auto& e : ends_)
            if (e.zk == ZKind::finite) pts.push_back(e.z);
        return pts;
    }

    double spread() const {
        auto pts = finite_special_points();
        double s = 1.0;
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                s = std::max(s, std::abs(pts[i] - pts[j]));
        return s;
    }

    cplx sqrt_fiber(cplx z0) const {
        if (!f_) return 0.0;
        return std::sqrt(f_->value_or_throw(z0));
    }

private:
    void analyze_curve() {
        auto check_side = [&](const Poly& p) {
            if (p.degree() < 1) return;
            for (const auto& cl : cluster_roots(poly_roots(p))) {
                if (cl.multiplicity % 2 == 0)
                    throw std::invalid_argument(
                        "curve coefficient has an even-order zero or pole; the double cover "
                        "would be singular there");
            }
        };
        check_side(f_->num());
        check_side(f_->den());

        if (f_->num().degree() >= 1)
            for (const auto& cl : cluster_roots(poly_roots(f_->num()))) branch_.push_back(cl.center);
        if (f_->den().degree() >= 1)
            for (const auto& cl : cluster_roots(poly_roots(f_->den()))) {
                branch_.push_back(cl.center);
                w_poles_.push_back(cl.center);
            }
        branch_inf_ = std::abs(f_->order_at_infinity()) % 2 == 1;
        std::sort(branch_.begin(), branch_.end(), [](cplx a, cplx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
    }

    int clustered_order(cplx z0) const {
        int m = 0;
        double tol = 1e-6 * (1.0 + std::abs(z0));
        if (f_->num().degree() >= 1)
            for (cplx r : poly_roots(f_->num()))
                if (std::abs(r - z0) <= tol) ++m;
        if (f_->den().degree() >= 1)
            for (cplx r : poly_roots(f_->den()))
                if (std::abs(r - z0) <= tol) --m;
        return m;
    }

    Kind kind_ = Kind::plane;
    std::shared_ptr<const ComplexRational> f_;
    std::vector<PointOnCurve> ends_;
    std::vector<cplx> branch_;
    std::vector<cplx> w_poles_;
    bool branch_inf_ = false;
};

// Straight line or axis-aligned elliptical arc, parametrized by u in [0, 1].
struct Segment {
    enum class Kind { line, arc };
    Kind kind = Kind::line;
    cplx a{0.0}, b{0.0};
    cplx center{0.0};
    double rx = 0.0, ry = 0.0, t0 = 0.0, t1 = 0.0;

    static Segment line(cplx from, cplx to) {
        Segment s;
        s.kind = Kind::line;
        s.a = from;
        s.b = to;
        return s;
    }
    static Segment arc(cplx center, double rx, double ry, double t0, double t1) {
        Segment s;
        s.kind = Kind::arc;
        s.center = center;
        s.rx = rx;
        s.ry = ry;
        s.t0 = t0;
        s.t1 = t1;
        return s;
    }

    cplx point(double u) const {
        if (kind == Kind::line) return a + (b - a) * u;
        double t = t0 + (t1 - t0) * u;
        return center + cplx(rx * std::cos(t), ry * std::sin(t));
    }
    cplx velocity(double u) const {
        if (kind == Kind::line) return b - a;
        double t = t0 + (t1 - t0) * u;
        return cplx(-rx * std::sin(t), ry * std::cos(t)) * (t1 - t0);
    }
    double length_estimate() const {
        if (kind == Kind::line) return std::abs(b - a);
        return 0.5 * (rx + ry) * std::abs(t1 - t0);
    }
};

struct PathSpec {
    std::vector<Segment> segments;

    cplx start() const { return segments.front().point(0.0); }
    cplx end() const { return segments.back().point(1.0); }
    double total_length_estimate() const {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.length_estimate();
        return s;
    }
    cplx point(double gu) const {
        auto [k, lu] = locate(gu);
        return segments[k].point(lu);
    }
    cplx velocity(double gu) const {
        auto [k, lu] = locate(gu);
        return segments[k].velocity(lu);
    }
    std::pair<size_t, double> locate(double gu) const {
        double n = double(segments.size());
        if (gu <= 0.0) return {0, 0.0};
        if (gu >= n) return {segments.size() - 1, 1.0};
        size_t k = size_t(gu);
        return {k, gu - double(k)};
    }
};

struct LiftOptions {
    double clearance_rel = 1e-3;
    std::optional<cplx> start_w;
    int init_samples = 64;
    int max_depth = 42;
};

// A path together with a continuous branch of w along it. On plane domains
// the w channel stays zero.
class LiftedPath {
public:
    PathSpec spec;
    Domain domain;
    std::vector<double> u;
    std::vector<cplx> z, w;
    bool closed_z = false;
    bool w_flipped = false;

    cplx w_at(double gu) const {
        if (domain.on_plane()) return 0.0;
        size_t idx = nearest_index(gu);
        cplx zq = spec.point(gu);
        cplx s = std::sqrt(domain.curve()->value_or_throw(zq));
        return (std::abs(s - w[idx]) <= std::abs(-s - w[idx])) ? s : -s;
    }

    cplx end_w() const { return domain.on_plane() ? cplx(0.0) : w.back(); }
    cplx start_w() const { return domain.on_plane() ? cplx(0.0) : w.front(); }

private:
    size_t nearest_index(double gu) const {
        auto it = std::lower_bound(u.begin(), u.end(), gu);
        if (it == u.begin()) return 0;
        if (it == u.end()) return u.size() - 1;
        size_t hi = size_t(it - u.begin());
        return (gu - u[hi - 1] <= u[hi] - gu) ? hi - 1 : hi;
    }
};

inline cplx nearest_sqrt(cplx fval, cplx ref) {
    cplx s = std::sqrt(fval);
    return (std::abs(s - ref) <= std::abs(-s - ref)) ? s : -s;
}

inline LiftedPath lift_path(const Domain& dom, const PathSpec& spec, LiftOptions opt = {}) {
    if (spec.segments.empty()) throw PathError("empty path");
    double scale = dom.spread();
    for (size_t k = 0; k + 1 < spec.segments.size(); ++k) {
        if (std::abs(spec.segments[k].point(1.0) - spec.segments[k + 1].point(0.0)) >
            1e-9 * scale)
            throw PathError("path segments are not contiguous");
    }

    const double clearance = opt.clearance_rel * scale;
    auto special = dom.finite_special_points();
    for (const auto& seg : spec.segments) {
        for (int i = 0; i <= 512; ++i) {
            cplx zz = seg.point(double(i) / 512.0);
            for (cplx sp : special) {
                if (std::abs(zz - sp) < clearance) {
                    std::ostringstream os;
                    os.precision(10);
                    os << "path passes within clearance " << clearance << " of the point ("
                       << sp.real() << "," << sp.imag() << ")";
                    throw PathError(os.str());
                }
            }
        }
    }

    LiftedPath lp;
    lp.spec = spec;
    lp.domain = dom;

    if (dom.on_plane()) {
        for (size_t k = 0; k < spec.segments.size(); ++k) {
            int n = opt.init_samples;
            for (int i = (k == 0 ? 0 : 1); i <= n; ++i) {
                double lu = double(i) / n;
                lp.u.push_back(double(k) + lu);
                lp.z.push_back(spec.segments[k].point(lu));
                lp.w.push_back(0.0);
            }
        }
    } else {
        const ComplexRational& f = *dom.curve();
        cplx z0 = spec.start();
        cplx f0 = f.value_or_throw(z0);
        cplx w0 = opt.start_w ? *opt.start_w : std::sqrt(f0);
        if (std::abs(w0 * w0 - f0) > 1e-8 * (1.0 + std::abs(f0)))
            throw PathError("start value of w does not satisfy the curve equation");

        lp.u.push_back(0.0);
        lp.z.push_back(z0);
        lp.w.push_back(w0);

        for (size_t k = 0; k < spec.segments.size(); ++k) {
            const Segment& seg = spec.segments[k];
            // Extends the skeleton from (u0, w0) to u1, splitting until the
            // root choice is unambiguous.
            std::function<void(double, cplx, double, int)> extend =
                [&](double u0, cplx wa, double u1, int depth) {
                    cplx z1 = seg.point(u1);
                    cplx w1 = nearest_sqrt(f.value_or_throw(z1), wa);
                    double zm_u = 0.5 * (u0 + u1);
                    cplx wm = nearest_sqrt(f.value_or_throw(seg.point(zm_u)), wa);
                    cplx w1_via_m = nearest_sqrt(f.value_or_throw(z1), wm);
                    bool small_step = std::abs(w1 - wa) <=
                                      0.35 * (std::abs(wa) + std::abs(w1)) + 1e-14;
                    bool consistent = std::abs(w1_via_m - w1) <= std::abs(w1_via_m + w1);
                    if (small_step && consistent) {
                        lp.u.push_back(double(k) + u1);
                        lp.z.push_back(z1);
                        lp.w.push_back(w1);
                        return;
                    }
                    if (depth >= opt.max_depth)
                        throw PathError("square root continuation failed along the path");
                    extend(u0, wa, zm_u, depth + 1);
                    extend(zm_u, lp.w.back(), u1, depth + 1);
                };
            int n = opt.init_samples;
            for (int i = 1; i <= n; ++i)
                extend(double(i - 1) / n, lp.w.back(), double(i) / n, 0);
        }
    }

    cplx zs = lp.z.front(), ze = lp.z.back();
    lp.closed_z = std::abs(ze - zs) <= 1e-9 * (1.0 + std::abs(zs));
    if (lp.closed_z && !dom.on_plane())
        lp.w_flipped = std::abs(lp.w.back() + lp.w.front()) < std::abs(lp.w.back() - lp.w.front());
    return lp;
}

struct CanonicalLoop {
    std::string name;
    PathSpec path;
    cplx left{0.0}, right{0.0};  // enclosed branch cut for curve domains
};

// Homology generators to test periods on. Curve domains get one
// counterclockwise ellipse per consecutive pair of real branch points,
// starting at the rightmost vertex; plane domains get a circle per finite
// puncture.
inline std::vector<CanonicalLoop> canonical_loops(const Domain& dom) {
    std::vector<CanonicalLoop> loops;
    if (dom.on_plane()) {
        std::vector<cplx> punct;
        for (const auto& e : dom.ends())
            if (e.zk == ZKind::finite) punct.push_back(e.z);
        for (size_t i = 0; i < punct.size(); ++i) {
            double iso = 1e300;
            for (size_t j = 0; j < punct.size(); ++j)
                if (j != i) iso = std::min(iso, std::abs(punct[i] - punct[j]));
            double rho = (iso < 1e300) ? 0.4 * iso : 1.0;
            CanonicalLoop L;
            L.name = "gamma" + std::to_string(i + 1);
            L.path.segments = {Segment::arc(punct[i], rho, rho, 0.0, 2.0 * M_PI)};
            L.left = L.right = punct[i];
            loops.push_back(std::move(L));
        }
        return loops;
    }

    auto branch = dom.finite_branch_points();
    for (cplx b : branch)
        if (std::abs(b.imag()) > 1e-9 * (1.0 + std::abs(b)))
            throw std::invalid_argument(
                "canonical loops need real branch points; got a non-real one");
    std::vector<double> xs;
    for (cplx b : branch) xs.push_back(b.real());
    std::sort(xs.begin(), xs.end());

    auto others = dom.finite_special_points();
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double alpha = xs[i], beta = xs[i + 1];
        double len = beta - alpha;
        double guard = 1e300;
        for (cplx q : others) {
            if (std::abs(q - cplx(alpha)) < 1e-9 * (1.0 + std::abs(q))) continue;
            if (std::abs(q - cplx(beta)) < 1e-9 * (1.0 + std::abs(q))) continue;
            double dx = 0.0;
            if (q.real() < alpha)
                dx = alpha - q.real();
            else if (q.real() > beta)
                dx = q.real() - beta;
            double d = std::hypot(dx, q.imag());
            if (d > 1e-12) guard = std::min(guard, d);
        }
        double margin = std::min(0.1 * len, 0.5 * guard);
        double rx = 0.5 * len + margin;
        double ry = 0.5 * rx;
        CanonicalLoop L;
        L.name = "gamma" + std::to_string(i + 1);
        L.path.segments = {
            Segment::arc(cplx(0.5 * (alpha + beta), 0.0), rx, ry, 0.0, 2.0 * M_PI)};
        L.left = alpha;
        L.right = beta;
        loops.push_back(std::move(L));
    }
    return loops;
}

enum class InvolutionKind { identity, plane_antipodal, plane_conj_antipodal, curve_antipodal };

struct InvolutionSpec {
    InvolutionKind kind = InvolutionKind::identity;
    bool trivial() const { return kind == InvolutionKind::identity; }
};

inline SurfacePoint apply_involution(const InvolutionSpec& inv, const SurfacePoint& p) {
    switch (inv.kind) {
        case InvolutionKind::identity:
            return p;
        case InvolutionKind::plane_antipodal:
            return {-1.0 / std::conj(p.z), 0.0};
        case InvolutionKind::plane_conj_antipodal:
            return {1.0 / std::conj(p.z), 0.0};
        case InvolutionKind::curve_antipodal:
            return {-1.0 / std::conj(p.z), -1.0 / std::conj(p.w)};
    }
    throw std::logic_error("unknown involution kind");
}

inline PointOnCurve apply_involution(const InvolutionSpec& inv, const PointOnCurve& p) {
    if (inv.kind == InvolutionKind::identity) return p;
    PointOnCurve q;
    bool z_zero = p.zk == ZKind::finite && std::abs(p.z) < 1e-12;
    if (p.zk == ZKind::infinity) {
        q.zk = ZKind::finite;
        q.z = 0.0;
    } else if (z_zero) {
        q.zk = ZKind::infinity;
    } else {
        q.zk = ZKind::finite;
        cplx base = 1.0 / std::conj(p.z);
        q.z = (inv.kind == InvolutionKind::plane_conj_antipodal) ? base : -base;
    }
    if (inv.kind == InvolutionKind::curve_antipodal) {
        if (p.wk == WKind::none)
            q.wk = WKind::none;
        else if (p.wk == WKind::infinite) {
            q.wk = WKind::finite;
            q.w = 0.0;
        } else if (std::abs(p.w) < 1e-12) {
            q.wk = WKind::infinite;
        } else {
            q.wk = WKind::finite;
            q.w = -1.0 / std::conj(p.w);
        }
    } else {
        q.wk = p.wk;
        q.w = p.w;
    }
    return q;
}

// d/du of the holomorphic representative A with I(z) = A(conj z), evaluated at
// u = conj z; the factor picked up by coefficient pullbacks under I.
inline cplx antiholomorphic_chart_derivative(const InvolutionSpec& inv, cplx z) {
    cplx u = std::conj(z);
    switch (inv.kind) {
        case InvolutionKind::plane_antipodal:
        case InvolutionKind::curve_antipodal:
            return 1.0 / (u * u);
        case InvolutionKind::plane_conj_antipodal:
            return -1.0 / (u * u);
        default:
            throw std::logic_error("derivative factor requested for a holomorphic involution");
    }
}

// Minimum chordal displacement over a deterministic sphere sample; positive
// means no fixed point was seen.
inline double involution_min_displacement(const InvolutionSpec& inv, int n = 400) {
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * M_PI * double(i) / n + 0.05;
        double r = std::exp(2.4 * std::sin(3.7 * i + 0.3));
        cplx z = r * std::exp(cplx(0.0, a));
        SurfacePoint q = apply_involution(inv, {z, 0.0});
        best = std::min(best, chordal_distance(z, q.z));
    }
    return best;
}

}  // namespace maxface
