#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace maxface {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 20000;
    int max_depth = 48;
};

struct IntegralValue {
    std::complex<double> value{0.0};
    double error_estimate = 0.0;
    double max_abs_integrand = 0.0;
    int panels = 0;
};

namespace gk {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1], positive half.
inline constexpr double xk[8] = {
    0.0000000000000000, 0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993945, 0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
inline constexpr double wk[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
// Gauss weights attach to xk[0], xk[2], xk[4], xk[6].
inline constexpr double wg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

}  // namespace gk

// Adaptive Gauss-Kronrod over a real parameter; the integrand may be complex.
// Deterministic: fixed node set, depth-first splitting, no randomness.
template <typename F>
IntegralValue integrate_gk(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    struct Panel {
        double a, b;
        int depth;
    };

    IntegralValue out;
    if (a == b) return out;
    const double total_len = std::abs(b - a);

    std::vector<Panel> stack;
    stack.push_back({a, b, 0});

    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        if (++out.panels > cfg.max_panels)
            throw std::runtime_error("quadrature failed to converge (panel budget exhausted)");

        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);

        std::complex<double> k15(0.0), g7(0.0);
        for (int i = 0; i < 8; ++i) {
            std::complex<double> fv;
            if (i == 0) {
                fv = f(mid);
                k15 += gk::wk[0] * fv;
                g7 += gk::wg[0] * fv;
                out.max_abs_integrand = std::max(out.max_abs_integrand, std::abs(fv));
                continue;
            }
            std::complex<double> fp = f(mid + half * gk::xk[i]);
            std::complex<double> fm = f(mid - half * gk::xk[i]);
            out.max_abs_integrand =
                std::max({out.max_abs_integrand, std::abs(fp), std::abs(fm)});
            k15 += gk::wk[i] * (fp + fm);
            if (i % 2 == 0) g7 += gk::wg[i / 2] * (fp + fm);
        }
        k15 *= half;
        g7 *= half;

        const double err = std::abs(k15 - g7);
        const double budget =
            cfg.abs_tol * (std::abs(p.b - p.a) / total_len) + cfg.rel_tol * std::abs(k15);
        if (err <= budget || p.depth >= cfg.max_depth) {
            out.value += k15;
            out.error_estimate += err;
        } else {
            stack.push_back({mid, p.b, p.depth + 1});
            stack.push_back({p.a, mid, p.depth + 1});
        }
    }
    return out;
}

// Same integral with an inverse-square-root endpoint singularity absorbed at
// one or both ends via z = a + (b-a) u^2 style substitutions.
template <typename F>
IntegralValue integrate_gk_sqrt_endpoints(F&& f, double a, double b,
                                          const QuadratureConfig& cfg = {}) {
    const double m = 0.5 * (a + b);
    // Left half: z = a + (m-a) u^2, dz = 2 (m-a) u du.
    auto left = integrate_gk(
        [&](double u) {
            double z = a + (m - a) * u * u;
            return f(z) * (2.0 * (m - a) * u);
        },
        0.0, 1.0, cfg);
    // Right half: z = b - (b-m) u^2 turns the m -> b leg into u: 0 -> 1.
    auto right = integrate_gk(
        [&](double u) {
            double z = b - (b - m) * u * u;
            return f(z) * (2.0 * (b - m) * u);
        },
        0.0, 1.0, cfg);
    IntegralValue out;
    out.value = left.value + right.value;
    out.error_estimate = left.error_estimate + right.error_estimate;
    out.max_abs_integrand = std::max(left.max_abs_integrand, right.max_abs_integrand);
    out.panels = left.panels + right.panels;
    return out;
}

}  // namespace maxface
