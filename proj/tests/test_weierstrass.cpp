#include <catch2/catch_amalgamated.hpp>

#include <maxface/weierstrass.hpp>

using namespace maxface;
using Catch::Approx;

namespace {

WeierstrassData catenoid() {
    WeierstrassData d;
    d.label = "catenoid";
    d.domain = Domain::punctured_plane(
        {PointOnCurve::plane(0.0), PointOnCurve::plane_infinity()});
    d.g = CurveFunction::plane(ComplexRational::z());
    d.phi3 = CurveFunction::plane(ComplexRational(Poly::constant(1.0), Poly::x()));
    d.involution = {InvolutionKind::identity};
    d.chi_double_cover = 2;
    d.chi_quotient = 2;
    return d;
}

WeierstrassData klein(double r) {
    WeierstrassData d;
    d.label = "klein";
    ComplexRational f(Poly({0.0, -1.0, r}), Poly({r, 1.0}));
    d.domain = Domain::hyperelliptic(f, {PointOnCurve::curve(0.0, 0.0),
                                         PointOnCurve::curve_infinity(WKind::infinite)});
    auto fc = d.domain.curve();
    d.g = CurveFunction::on_curve(fc, ComplexRational::zero(),
                                  ComplexRational(Poly({1.0, 1.0}), Poly({-1.0, 1.0})));
    const cplx i(0.0, 1.0);
    d.phi3 = CurveFunction::on_curve(fc, ComplexRational(Poly({-i, 0.0, i}), Poly({0.0, 0.0, 1.0})),
                                     ComplexRational::zero());
    d.involution = {InvolutionKind::curve_antipodal};
    d.chi_double_cover = 0;
    d.chi_quotient = 0;
    return d;
}

}  // namespace

TEST_CASE("catenoid conformal factor at z = 2") {
    WeierstrassData d = catenoid();
    REQUIRE(conformal_factor(d, SurfacePoint{cplx(2.0), 0.0}) == Approx(9.0 / 64.0).epsilon(1e-12));
    // the metric degenerates exactly on |g| = 1
    REQUIRE(conformal_factor(d, SurfacePoint{std::polar(1.0, 0.7), 0.0}) < 1e-14);
    REQUIRE(regularity_density(d, SurfacePoint{std::polar(1.0, 0.7), 0.0}) == Approx(1.0));
}

TEST_CASE("phi vector satisfies the conformality identity") {
    for (WeierstrassData d : {catenoid(), klein(0.5)}) {
        auto phis = phi_vector(d);
        for (const SurfacePoint& p : domain_samples(d.domain, 60)) {
            cplx p1 = phis[0].eval(p.z, p.w);
            cplx p2 = phis[1].eval(p.z, p.w);
            cplx p3 = phis[2].eval(p.z, p.w);
            double scale = std::max(1.0, std::norm(p1) + std::norm(p2) + std::norm(p3));
            REQUIRE(std::abs(p1 * p1 + p2 * p2 - p3 * p3) / scale < 1e-13);
        }
    }
}

TEST_CASE("phi1 matches its definition from g and phi3") {
    WeierstrassData d = klein(0.7);
    auto phis = phi_vector(d);
    SurfacePoint p{cplx(1.4, 0.9), d.domain.sqrt_fiber(cplx(1.4, 0.9))};
    cplx g = d.g.eval(p.z, p.w);
    cplx f3 = d.phi3.eval(p.z, p.w);
    cplx expect = cplx(0.0, 0.5) * (1.0 / g - g) * f3;
    REQUIRE(std::abs(phis[0].eval(p.z, p.w) - expect) < 1e-12 * (1.0 + std::abs(expect)));
}

TEST_CASE("regularity density separates singular from regular points") {
    WeierstrassData d = catenoid();
    // |phi3/g| = 1/|z|^2 and |g phi3| = 1 at z = 2
    SurfacePoint p{cplx(2.0), 0.0};
    REQUIRE(regularity_density(d, p) == Approx(0.625));
    REQUIRE(singular_field(d, p) == Approx(1.0));
}

TEST_CASE("domain samples are deterministic, on the curve, and clear of special points") {
    Domain dom = klein(0.5).domain;
    auto a = domain_samples(dom, 200);
    auto b = domain_samples(dom, 200);
    REQUIRE(a.size() == 200);
    for (size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].z == b[i].z);
        REQUIRE(a[i].w == b[i].w);
    }
    const ComplexRational& f = *dom.curve();
    double clearance = 5e-3 * dom.spread();
    for (const auto& p : a) {
        REQUIRE(std::abs(p.w * p.w - f.eval(p.z).value) < 1e-10 * (1.0 + std::abs(p.z)));
        for (cplx sp : dom.finite_special_points()) REQUIRE(std::abs(p.z - sp) >= clearance);
    }
}

TEST_CASE("involution compatibility holds for the nonorientable models") {
    WeierstrassData d = klein(0.31);
    InvolutionCompat ic = involution_compatibility(d);
    REQUIRE(ic.samples > 0);
    REQUIRE(ic.max_g_residual < 1e-8);
    REQUIRE(ic.max_phi3_residual < 1e-8);
}

TEST_CASE("involution compatibility flags a mismatched pairing") {
    // same curve, but a gauss map that does not satisfy g(I p) = 1/conj(g(p))
    WeierstrassData d = klein(0.5);
    d.g = CurveFunction::on_curve(d.domain.curve(), ComplexRational::zero(),
                                  ComplexRational(Poly({1.0, 2.0}), Poly({-1.0, 1.0})));
    InvolutionCompat ic = involution_compatibility(d);
    REQUIRE(ic.max_g_residual > 1e-3);
}
