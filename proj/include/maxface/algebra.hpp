#pragma once

#include <memory>
#include <optional>

#include "polynomial.hpp"

#include <json.hpp>

namespace maxface {

struct EvalResult {
    cplx value{0.0};
    bool pole = false;
    int pole_order = 0;
};

// Quotient of polynomials, kept with a monic denominator. Construction cancels
// shared roots and keeps the reduced pair only if it reproduces the original
// values at probe points; otherwise the input coefficients are preserved.
class ComplexRational {
public:
    ComplexRational() : num_(), den_(Poly::constant(1.0)) {}

    ComplexRational(Poly num, Poly den) {
        if (den.is_zero()) throw std::invalid_argument("rational with zero denominator");
        if (num.is_zero()) {
            num_ = Poly();
            den_ = Poly::constant(1.0);
            return;
        }
        cplx dl = den.lead();
        num_ = num * (cplx(1.0) / dl);
        den_ = den * (cplx(1.0) / dl);
        reduce();
    }

    static ComplexRational constant(cplx v) { return ComplexRational(Poly::constant(v), Poly::constant(1.0)); }
    static ComplexRational zero() { return ComplexRational(); }
    static ComplexRational z() { return ComplexRational(Poly::x(), Poly::constant(1.0)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    // Largest of the two degrees; for a reduced fraction this is the degree of
    // the induced map on the sphere.
    int map_degree() const {
        if (is_zero()) return 0;
        return std::max(num_.degree(), den_.degree());
    }

    EvalResult eval(cplx zv) const {
        if (is_zero()) return {cplx(0.0), false, 0};
        cplx nv = num_.eval(zv);
        cplx dv = den_.eval(zv);
        double dscale = den_.eval_scale(std::abs(zv));
        if (std::abs(dv) <= 1e-13 * std::max(dscale, 1e-300)) {
            int m = local_multiplicity(den_, zv);
            int k = local_multiplicity(num_, zv);
            if (k >= m) {
                // Removable in exact arithmetic; step slightly off the point.
                cplx z2 = zv + cplx(1e-7, 1e-7) * (1.0 + std::abs(zv));
                return {num_.eval(z2) / den_.eval(z2), false, 0};
            }
            return {cplx(0.0), true, m - k};
        }
        return {nv / dv, false, 0};
    }

    // Value with poles surfaced as an exception; for integrands, where hitting
    // a pole means the path construction is wrong.
    cplx value_or_throw(cplx zv) const {
        EvalResult r = eval(zv);
        if (r.pole) throw std::runtime_error("rational function evaluated at a pole");
        return r.value;
    }

    ComplexRational derivative() const {
        return ComplexRational(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return ComplexRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return ComplexRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return ComplexRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        if (b.is_zero()) throw std::invalid_argument("division by zero rational");
        return ComplexRational(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend ComplexRational operator*(const ComplexRational& a, cplx s) {
        return ComplexRational(a.num_ * s, a.den_);
    }
    friend ComplexRational operator*(cplx s, const ComplexRational& a) { return a * s; }

    // Multiplicity of zv as a root of num (>=1) or den (<=-1); 0 otherwise.
    int order_at_point(cplx zv) const {
        if (is_zero()) throw std::logic_error("order of the zero function");
        int kn = local_multiplicity(num_, zv);
        int kd = local_multiplicity(den_, zv);
        return kn - kd;
    }

    int order_at_infinity() const {
        if (is_zero()) throw std::logic_error("order of the zero function");
        return den_.degree() - num_.degree();
    }

    nlohmann::json to_json() const {
        auto poly_json = [](const Poly& p) {
            nlohmann::json arr = nlohmann::json::array();
            for (const cplx& a : p.coeffs()) arr.push_back({a.real(), a.imag()});
            if (p.is_zero()) arr.push_back({0.0, 0.0});
            return arr;
        };
        return {{"num", poly_json(num_)}, {"den", poly_json(den_)}};
    }

    static ComplexRational from_json(const nlohmann::json& j) {
        auto poly_from = [](const nlohmann::json& arr) {
            std::vector<cplx> c;
            for (const auto& e : arr) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
            return Poly(std::move(c));
        };
        return ComplexRational(poly_from(j.at("num")), poly_from(j.at("den")));
    }

private:
    static int local_multiplicity(const Poly& p, cplx zv) {
        if (p.is_zero()) return 0;
        if (p.degree() == 0) return 0;
        auto roots = poly_roots(p);
        int m = 0;
        double tol = 1e-6 * (1.0 + std::abs(zv));
        for (cplx r : roots)
            if (std::abs(r - zv) <= tol) ++m;
        return m;
    }

    static cplx polish_root(const Poly& p, cplx r) {
        cplx best = r;
        double best_v = std::abs(p.eval(r));
        cplx x = r;
        for (int it = 0; it < 6; ++it) {
            auto [v, d] = p.eval_with_derivative(x);
            if (std::abs(d) == 0.0) break;
            x -= v / d;
            double vx = std::abs(p.eval(x));
            if (vx < best_v) {
                best_v = vx;
                best = x;
            }
        }
        return best;
    }

    // Exact division by z; refuses when the constant term says 0 is not a root.
    static bool deflate_zero(Poly& p) {
        const auto& c = p.coeffs();
        if (p.degree() < 1) return false;
        double scale = 0.0;
        for (const cplx& ci : c) scale = std::max(scale, std::abs(ci));
        if (std::abs(c[0]) > 1e-9 * scale) return false;
        p = Poly(std::vector<cplx>(c.begin() + 1, c.end()));
        return true;
    }

    // Synthetic division by (z - r); refuses when the remainder says r is not
    // actually a root.
    static bool deflate_once(Poly& p, cplx r) {
        const auto& c = p.coeffs();
        int n = p.degree();
        if (n < 1) return false;
        double scale = 0.0;
        for (const cplx& ci : c) scale = std::max(scale, std::abs(ci));
        std::vector<cplx> q(n);
        cplx acc = c[n];
        for (int k = n - 1; k >= 0; --k) {
            q[size_t(k)] = acc;
            acc = c[size_t(k)] + acc * r;
        }
        double growth = std::pow(std::max(1.0, std::abs(r)), n);
        if (std::abs(acc) > 1e-10 * scale * growth * (n + 1)) return false;
        p = Poly(std::move(q));
        return true;
    }

    void reduce() {
        if (num_.degree() < 1 || den_.degree() < 1) return;
        auto nr = poly_roots(num_);
        auto dr = poly_roots(den_);
        std::vector<bool> cancelled_n(nr.size(), false), cancelled_d(dr.size(), false);
        int cancellations = 0;
        for (size_t i = 0; i < dr.size(); ++i) {
            double best = 1e300;
            size_t best_j = nr.size();
            for (size_t j = 0; j < nr.size(); ++j) {
                if (cancelled_n[j]) continue;
                double d = std::abs(dr[i] - nr[j]);
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            if (best_j < nr.size() && best <= 1e-6 * (1.0 + std::abs(dr[i]))) {
                cancelled_n[best_j] = true;
                cancelled_d[i] = true;
                ++cancellations;
            }
        }
        if (cancellations == 0) return;

        // Divide the shared factors out one at a time; deflation keeps the
        // surviving coefficients bit-exact, unlike rebuilding from roots.
        // Shared roots at the origin get an exact coefficient shift, which a
        // polished division cannot match when the origin root is multiple.
        Poly rn = num_, rd = den_;
        int done = 0;
        for (size_t i = 0; i < dr.size(); ++i) {
            if (!cancelled_d[i]) continue;
            if (std::abs(dr[i]) <= 1e-10) {
                Poly tn = rn, td = rd;
                if (!deflate_zero(tn) || !deflate_zero(td)) continue;
                rn = std::move(tn);
                rd = std::move(td);
                ++done;
                continue;
            }
            cplx pn = polish_root(rn, dr[i]);
            cplx pd = polish_root(rd, dr[i]);
            if (std::abs(pn - pd) > 1e-6 * (1.0 + std::abs(pd))) continue;
            // Deflate both sides at one shared point. Polish stalls on a
            // multiple root, so the side where the root is simple gives the
            // accurate point; the remainder gate rejects the stalled one.
            bool ok = false;
            for (cplx cand : {pn, pd}) {
                Poly tn = rn, td = rd;
                if (deflate_once(tn, cand) && deflate_once(td, cand)) {
                    rn = std::move(tn);
                    rd = std::move(td);
                    ok = true;
                    break;
                }
            }
            if (!ok) continue;
            ++done;
        }
        if (done == 0) return;

        // Accept the reduction only if it agrees with the original away from
        // the cancelled points.
        for (int k = 0; k < 8; ++k) {
            double ang = 0.37 + 0.71 * k;
            cplx zv = 1.618 * std::exp(cplx(0.0, ang)) + cplx(0.11, 0.07);
            cplx dv = den_.eval(zv);
            cplx rdv = rd.eval(zv);
            if (std::abs(dv) < 1e-8 || std::abs(rdv) < 1e-8) continue;
            cplx orig = num_.eval(zv) / dv;
            cplx red = rn.eval(zv) / rdv;
            if (std::abs(orig - red) > 1e-7 * (1.0 + std::abs(orig))) return;
        }
        num_ = std::move(rn);
        den_ = std::move(rd);
    }

    Poly num_, den_;
};

// Function a(z) + b(z) w on the curve w^2 = f(z); f == nullptr means the
// function lives on a plane domain and b is ignored.
struct CurveFunction {
    ComplexRational a;
    ComplexRational b;
    std::shared_ptr<const ComplexRational> f;

    CurveFunction() = default;

    static CurveFunction plane(ComplexRational a0) {
        CurveFunction r;
        r.a = std::move(a0);
        return r;
    }
    static CurveFunction on_curve(std::shared_ptr<const ComplexRational> f0, ComplexRational a0,
                                  ComplexRational b0) {
        CurveFunction r;
        r.a = std::move(a0);
        r.b = std::move(b0);
        r.f = std::move(f0);
        return r;
    }

    bool on_plane() const { return f == nullptr; }
    bool is_zero() const { return a.is_zero() && (on_plane() || b.is_zero()); }

    cplx eval(cplx z, cplx w) const {
        cplx v = a.value_or_throw(z);
        if (!on_plane() && !b.is_zero()) v += b.value_or_throw(z) * w;
        return v;
    }

    static std::shared_ptr<const ComplexRational> merge_curve(const CurveFunction& x,
                                                              const CurveFunction& y) {
        if (x.f && y.f) {
            if (x.f != y.f) throw std::invalid_argument("curve functions on different curves");
            return x.f;
        }
        return x.f ? x.f : y.f;
    }

    friend CurveFunction operator+(const CurveFunction& x, const CurveFunction& y) {
        auto fc = merge_curve(x, y);
        return on_curve_or_plane(fc, x.a + y.a, x.b + y.b);
    }
    friend CurveFunction operator-(const CurveFunction& x, const CurveFunction& y) {
        auto fc = merge_curve(x, y);
        return on_curve_or_plane(fc, x.a - y.a, x.b - y.b);
    }
    friend CurveFunction operator*(const CurveFunction& x, const CurveFunction& y) {
        auto fc = merge_curve(x, y);
        if (!fc) return plane(x.a * y.a);
        ComplexRational pa = x.a * y.a + x.b * y.b * (*fc);
        ComplexRational pb = x.a * y.b + x.b * y.a;
        return on_curve_or_plane(fc, std::move(pa), std::move(pb));
    }
    friend CurveFunction operator*(const CurveFunction& x, cplx s) {
        return on_curve_or_plane(x.f, x.a * s, x.b * s);
    }
    friend CurveFunction operator*(cplx s, const CurveFunction& x) { return x * s; }

    CurveFunction inverse() const {
        if (on_plane() || b.is_zero()) {
            if (a.is_zero()) throw std::invalid_argument("inverse of zero");
            return on_curve_or_plane(f, ComplexRational::constant(1.0) / a, ComplexRational::zero());
        }
        // 1/(a+bw) = (a-bw)/(a^2 - b^2 f)
        ComplexRational d = a * a - b * b * (*f);
        if (d.is_zero()) throw std::invalid_argument("inverse of zero norm curve function");
        return on_curve_or_plane(f, a / d, (ComplexRational::zero() - b) / d);
    }

    friend CurveFunction operator/(const CurveFunction& x, const CurveFunction& y) {
        return x * y.inverse();
    }

    // d/dz of a + b w as a coefficient function, using w' = f' w / (2 f).
    CurveFunction derivative_coefficient() const {
        if (on_plane() || b.is_zero()) return on_curve_or_plane(f, a.derivative(), ComplexRational::zero());
        ComplexRational fb = b.derivative() + b * f->derivative() / ((*f) * cplx(2.0));
        return on_curve_or_plane(f, a.derivative(), std::move(fb));
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["a"] = a.to_json();
        if (!on_plane()) {
            j["b"] = b.to_json();
            j["curve"] = f->to_json();
        }
        return j;
    }

private:
    static CurveFunction on_curve_or_plane(std::shared_ptr<const ComplexRational> fc,
                                           ComplexRational a0, ComplexRational b0) {
        if (!fc) return plane(std::move(a0));
        return on_curve(std::move(fc), std::move(a0), std::move(b0));
    }
};

}  // namespace maxface
