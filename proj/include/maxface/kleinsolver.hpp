#pragma once

#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace maxface {

namespace klein {

// |w_r(z)| on the segment from 0 to 1/r.
inline double abs_w(double r, double z) {
    return std::sqrt(std::abs(z * (r * z - 1.0) / (z + r)));
}

// Weight of the collapsed period integrand for h.
inline double h_weight(double r, double z) {
    return (-1.0 + z + r * (2.0 - 3.0 * z + r * (-4.0 + 4.0 * r + 3.0 * z))) / (r + z);
}

// Weight of the integrated-by-parts derivative integrand.
inline double hp_weight(double r, double z) {
    return (-r + 4.0 * r * r - z + 3.0 * r * z) / (r * (r + z));
}

}  // namespace klein

inline double klein_h(double r, const QuadratureConfig& cfg = {}) {
    if (r == 0.0) throw std::invalid_argument("h is undefined at r = 0");
    auto iv = integrate_gk_sqrt_endpoints(
        [r](double z) {
            return std::complex<double>(-2.0 * klein::abs_w(r, z) * klein::h_weight(r, z));
        },
        0.0, 1.0 / r, cfg);
    return iv.value.real();
}

inline double klein_h_prime(double r, const QuadratureConfig& cfg = {}) {
    if (r == 0.0) throw std::invalid_argument("h' is undefined at r = 0");
    auto iv = integrate_gk_sqrt_endpoints(
        [r](double z) {
            return std::complex<double>(-2.0 * klein::abs_w(r, z) * klein::hp_weight(r, z));
        },
        0.0, 1.0 / r, cfg);
    return iv.value.real();
}

// The derivative integrand before integration by parts; diverges like
// z^{-3/2} at 0, so it is only integrated on [eps, 1/r].
inline double klein_h_prime_raw_tail(double r, double eps, const QuadratureConfig& cfg = {}) {
    if (r == 0.0) throw std::invalid_argument("h' is undefined at r = 0");
    double b = 1.0 / r;
    auto raw = [r](double z) {
        double num = klein::abs_w(r, z) * (1.0 + z) * (1.0 + z) * (1.0 + z * z);
        double den = 2.0 * z * z * (r + z) * (-1.0 + r * z);
        return std::complex<double>(num / den);
    };
    // Only the 1/r endpoint keeps its square-root singularity here.
    double m = 0.5 * (eps + b);
    auto flat = integrate_gk(raw, eps, m, cfg);
    auto end = integrate_gk(
        [&](double u) { return raw(b - (b - m) * u * u) * (2.0 * (b - m) * u); }, 0.0, 1.0,
        cfg);
    return (flat.value + end.value).real();
}

// Boundary term linking the raw and by-parts derivative integrands:
// int_eps^b raw = int_eps^b byparts + boundary(eps).
inline double klein_h_prime_boundary(double r, double z) {
    double num = r + 2.0 * z - 2.0 * r * z - r * z * z + 4.0 * r * r * z * z;
    return -klein::abs_w(r, z) * num / (r * r * z);
}

inline double klein_h_prime_byparts_tail(double r, double eps, const QuadratureConfig& cfg = {}) {
    double b = 1.0 / r;
    double m = 0.5 * (eps + b);
    auto f = [r](double z) {
        return std::complex<double>(-2.0 * klein::abs_w(r, z) * klein::hp_weight(r, z));
    };
    auto flat = integrate_gk(f, eps, m, cfg);
    auto end = integrate_gk(
        [&](double u) { return f(b - (b - m) * u * u) * (2.0 * (b - m) * u); }, 0.0, 1.0, cfg);
    return (flat.value + end.value).real();
}

inline double klein_A1(double r, const QuadratureConfig& cfg = {}) {
    if (r <= 0.0) throw std::invalid_argument("A1 is used on r > 0 only");
    auto iv = integrate_gk_sqrt_endpoints(
        [r](double z) { return std::complex<double>(klein::abs_w(r, z)); }, 0.0, 1.0 / r, cfg);
    return iv.value.real();
}

inline double klein_A2(double r, const QuadratureConfig& cfg = {}) {
    if (r <= 0.0) throw std::invalid_argument("A2 is used on r > 0 only");
    auto iv = integrate_gk_sqrt_endpoints(
        [r](double z) { return std::complex<double>(klein::abs_w(r, z) / (z + r)); }, 0.0,
        1.0 / r, cfg);
    return iv.value.real();
}

inline double klein_q(double r) {
    if (r == 0.0 || r == 1.0) throw std::invalid_argument("q is undefined at r in {0, 1}");
    double num = 2.0 * (r * r * r - 3.0 * r * r + 4.0 * r - 1.0);
    double den = r * (r - 1.0) * (r * r + 1.0);
    return num / den;
}

// Unique real root of q, in closed form.
inline double klein_q_root() {
    double c = -9.0 + std::sqrt(93.0);
    return 1.0 - std::cbrt(2.0 / (3.0 * c)) + std::cbrt(c / 18.0);
}

// Classic Brent root bracketing refinement.
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb, double xtol, double ftol,
                  int max_iter, int* iters_out = nullptr) {
    if (fa * fb > 0.0) throw std::invalid_argument("root is not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) <= ftol) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    if (iters_out) *iters_out = it;
    return b;
}

struct RootResult {
    std::vector<double> roots;
    std::vector<std::pair<double, double>> brackets;
    int iterations = 0;
    double tol = 0.0;
};

struct KleinSolveOptions {
    double lo = 0.01;
    double hi = 0.99;
    int grid = 200;
    double tol = 1e-10;
};

// Finds the roots of h: brackets on a fixed grid in (lo, hi), refines each,
// requires exactly two, and checks the outside ranges carry no sign change.
inline RootResult solve_klein(KleinSolveOptions opt = {}, const QuadratureConfig& cfg = {}) {
    RootResult res;
    res.tol = opt.tol;

    std::vector<double> hv(opt.grid);
    for (int i = 0; i < opt.grid; ++i) {
        double r = opt.lo + (opt.hi - opt.lo) * double(i) / (opt.grid - 1);
        hv[i] = klein_h(r, cfg);
    }
    for (int i = 0; i + 1 < opt.grid; ++i) {
        if ((hv[i] < 0) == (hv[i + 1] < 0)) continue;
        double a = opt.lo + (opt.hi - opt.lo) * double(i) / (opt.grid - 1);
        double b = opt.lo + (opt.hi - opt.lo) * double(i + 1) / (opt.grid - 1);
        res.brackets.emplace_back(a, b);
        int it = 0;
        double root = brent_root([&](double r) { return klein_h(r, cfg); }, a, b, hv[i],
                                 hv[i + 1], 1e-14, opt.tol, 200, &it);
        res.iterations += it;
        res.roots.push_back(root);
    }

    if (res.roots.size() != 2)
        throw std::runtime_error("expected exactly two period roots in (0,1), found " +
                                 std::to_string(res.roots.size()));
    for (double root : res.roots)
        if (std::abs(klein_h(root, cfg)) > opt.tol)
            throw std::runtime_error("root refinement missed the residual tolerance");

    auto no_sign_change = [&](double lo, double hi, int n) {
        double prev = klein_h(lo, cfg);
        for (int i = 1; i < n; ++i) {
            // log-spaced in |r| to cover wide ranges evenly
            double t = double(i) / (n - 1);
            double r = (lo < 0) ? -std::exp(std::log(-lo) + t * (std::log(-hi) - std::log(-lo)))
                                : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
            double cur = klein_h(r, cfg);
            if ((prev < 0) != (cur < 0)) return false;
            prev = cur;
        }
        return true;
    };
    if (!no_sign_change(-50.0, -0.02, 120) || !no_sign_change(1.01, 50.0, 120))
        throw std::runtime_error("unexpected sign change outside (0,1)");
    return res;
}

}  // namespace maxface
