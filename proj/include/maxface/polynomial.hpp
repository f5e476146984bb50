#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxface {

using cplx = std::complex<double>;

// Coefficients ascending in the variable; an empty vector is the zero polynomial.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

    static Poly constant(cplx v) { return Poly({v}); }
    static Poly x() { return Poly({cplx(0.0), cplx(1.0)}); }

    static Poly from_roots(cplx leading, const std::vector<cplx>& roots) {
        Poly p = constant(leading);
        for (cplx r : roots) p = p * Poly({-r, cplx(1.0)});
        return p;
    }

    const std::vector<cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    cplx lead() const {
        if (c_.empty()) throw std::logic_error("lead of zero polynomial");
        return c_.back();
    }

    cplx eval(cplx z) const {
        cplx acc(0.0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    // Returns {p(z), p'(z)} in one pass.
    std::pair<cplx, cplx> eval_with_derivative(cplx z) const {
        cplx p(0.0), dp(0.0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            dp = dp * z + p;
            p = p * z + *it;
        }
        return {p, dp};
    }

    // Magnitude scale of the coefficient action at |z|; bounds |p(z)| from above.
    double eval_scale(double abs_z) const {
        double s = 0.0, zp = 1.0;
        for (const cplx& a : c_) {
            s += std::abs(a) * zp;
            zp *= abs_z;
        }
        return s;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<cplx> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
        return Poly(std::move(d));
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const cplx& a : c_) m = std::max(m, std::abs(a));
        return m;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<cplx> s(std::max(a.c_.size(), b.c_.size()), cplx(0.0));
        for (size_t k = 0; k < a.c_.size(); ++k) s[k] += a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) s[k] += b.c_[k];
        return Poly(std::move(s));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (b * cplx(-1.0)); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<cplx> s(a.c_.size() + b.c_.size() - 1, cplx(0.0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) s[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(s));
    }

    friend Poly operator*(const Poly& a, cplx s) {
        std::vector<cplx> c = a.c_;
        for (cplx& v : c) v *= s;
        return Poly(std::move(c));
    }
    friend Poly operator*(cplx s, const Poly& a) { return a * s; }

private:
    void trim() {
        double m = max_abs_coeff();
        if (m == 0.0) {
            c_.clear();
            return;
        }
        const double cut = 1e-12 * m;
        while (!c_.empty() && std::abs(c_.back()) <= cut) c_.pop_back();
    }

    std::vector<cplx> c_;
};

// Durand-Kerner with Newton polish. Degrees stay small here (<= ~20), so the
// simultaneous iteration is accurate enough once polished against the input.
inline std::vector<cplx> poly_roots(const Poly& p) {
    int n = p.degree();
    if (n < 0) throw std::invalid_argument("roots of zero polynomial");
    if (n == 0) return {};

    std::vector<cplx> a(p.coeffs());
    cplx lead = a.back();
    for (cplx& v : a) v /= lead;

    double bound = 0.0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(a[k]));
    double r0 = 1.0 + bound;

    std::vector<cplx> x(n);
    const cplx seed(0.4, 0.9);
    cplx pw = seed;
    for (int k = 0; k < n; ++k) {
        x[k] = r0 * pw;
        pw *= seed;
    }

    Poly monic{std::vector<cplx>(a)};
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx num = monic.eval(x[k]);
            cplx den(1.0);
            for (int j = 0; j < n; ++j)
                if (j != k) den *= (x[k] - x[j]);
            if (den == cplx(0.0)) den = cplx(1e-30);
            cplx step = num / den;
            x[k] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(x[k])));
        }
        if (worst < 1e-14) break;
    }

    for (int k = 0; k < n; ++k) {
        for (int it = 0; it < 4; ++it) {
            auto [v, dv] = p.eval_with_derivative(x[k]);
            if (std::abs(dv) < 1e-300) break;
            cplx step = v / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            x[k] -= step;
        }
    }

    std::sort(x.begin(), x.end(), [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });
    return x;
}

struct RootCluster {
    cplx center;
    int multiplicity = 0;
};

// Groups numerically coincident roots. A computed m-fold root scatters its
// copies over a disk of radius ~eps^(1/m), so the admission radius widens
// with the hypothesized multiplicity (capped at 4; rel_tol is the floor).
inline std::vector<RootCluster> cluster_roots(std::vector<cplx> roots, double rel_tol = 1e-6) {
    std::sort(roots.begin(), roots.end(), [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });
    const size_t n = roots.size();
    std::vector<RootCluster> out;
    std::vector<bool> used(n, false);
    for (size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<size_t> free;
        for (size_t j = 0; j < n; ++j)
            if (!used[j] && j != i) free.push_back(j);
        std::sort(free.begin(), free.end(), [&](size_t a, size_t b) {
            return std::abs(roots[a] - roots[i]) < std::abs(roots[b] - roots[i]);
        });
        size_t cap = std::min<size_t>(4, free.size() + 1);
        std::vector<size_t> chosen{i};
        for (size_t m = cap; m >= 1; --m) {
            std::vector<size_t> cand{i};
            cand.insert(cand.end(), free.begin(), free.begin() + (m - 1));
            cplx center = 0.0;
            for (size_t j : cand) center += roots[j];
            center /= double(m);
            double tol = (1.0 + std::abs(center)) *
                         std::max(rel_tol, 16.0 * std::pow(2.2e-16, 1.0 / double(m)));
            double spread = 0.0;
            for (size_t j : cand) spread = std::max(spread, std::abs(roots[j] - center));
            if (spread <= tol) {
                chosen = std::move(cand);
                break;
            }
        }
        cplx sum = 0.0;
        for (size_t j : chosen) {
            sum += roots[j];
            used[j] = true;
        }
        out.push_back({sum / double(chosen.size()), int(chosen.size())});
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& u, const RootCluster& v) {
        if (u.center.real() != v.center.real()) return u.center.real() < v.center.real();
        return u.center.imag() < v.center.imag();
    });
    return out;
}

}  // namespace maxface
