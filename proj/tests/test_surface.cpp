#include <catch2/catch_amalgamated.hpp>

#include <maxface/surface.hpp>

using namespace maxface;

namespace {

ComplexRational klein_f(double r) {
    return ComplexRational(Poly({0.0, -1.0, r}), Poly({r, 1.0}));
}

Domain klein_domain(double r) {
    return Domain::hyperelliptic(klein_f(r), {PointOnCurve::curve(0.0, 0.0),
                                              PointOnCurve::curve_infinity(WKind::infinite)});
}

PathSpec circle(cplx center, double radius) {
    PathSpec s;
    s.segments.push_back(Segment::arc(center, radius, radius, 0.0, 2.0 * M_PI));
    return s;
}

}  // namespace

TEST_CASE("hyperelliptic domain finds branch points and the infinite one") {
    Domain dom = klein_domain(0.5);
    auto b = dom.finite_branch_points();
    REQUIRE(b.size() == 3);
    REQUIRE(std::abs(b[0] - cplx(-0.5)) < 1e-12);
    REQUIRE(std::abs(b[1] - cplx(0.0)) < 1e-12);
    REQUIRE(std::abs(b[2] - cplx(2.0)) < 1e-12);
    REQUIRE(dom.branch_at_infinity());
    REQUIRE(dom.w_poles().size() == 1);
}

TEST_CASE("even multiplicity in the curve equation is rejected") {
    ComplexRational bad(Poly({1.0, -2.0, 1.0}), Poly::constant(1.0));  // (z-1)^2
    REQUIRE_THROWS(Domain::hyperelliptic(bad, {}));
}

TEST_CASE("sqrt_fiber satisfies the curve equation") {
    Domain dom = klein_domain(0.5);
    for (cplx z : {cplx(1.0, 1.0), cplx(-2.0, 0.3), cplx(0.1, -0.4)}) {
        cplx w = dom.sqrt_fiber(z);
        cplx f = klein_f(0.5).eval(z).value;
        REQUIRE(std::abs(w * w - f) < 1e-12 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("lifting a loop around one branch point flips the sheet") {
    Domain dom = klein_domain(0.5);
    LiftedPath one = lift_path(dom, circle(cplx(0.0), 0.2));
    REQUIRE(one.closed_z);
    REQUIRE(one.w_flipped);

    LiftedPath two = lift_path(dom, circle(cplx(-0.25), 0.45));  // encloses -1/2 and 0
    REQUIRE_FALSE(two.w_flipped);

    LiftedPath none = lift_path(dom, circle(cplx(1.0, 1.5), 0.4));
    REQUIRE_FALSE(none.w_flipped);
}

TEST_CASE("lift rejects paths through a branch point") {
    Domain dom = klein_domain(0.5);
    PathSpec s;
    s.segments.push_back(Segment::line(cplx(-1.0, 0.0), cplx(1.0, 0.0)));
    REQUIRE_THROWS_AS(lift_path(dom, s), PathError);
}

TEST_CASE("lift respects a requested start sheet") {
    Domain dom = klein_domain(0.5);
    cplx z0 = cplx(1.0, 1.5) + 0.4;
    LiftOptions opt;
    opt.start_w = -dom.sqrt_fiber(z0);
    LiftedPath lp = lift_path(dom, circle(cplx(1.0, 1.5), 0.4), opt);
    REQUIRE(std::abs(lp.start_w() - *opt.start_w) < 1e-10);
    REQUIRE(std::abs(lp.end_w() - *opt.start_w) < 1e-8);

    LiftOptions bad;
    bad.start_w = cplx(100.0, 3.0);
    REQUIRE_THROWS_AS(lift_path(dom, circle(cplx(1.0, 1.5), 0.4), bad), PathError);
}

TEST_CASE("canonical loops pair consecutive real branch points") {
    Domain dom = klein_domain(0.5);
    auto loops = canonical_loops(dom);
    REQUIRE(loops.size() == 2);
    REQUIRE(loops[0].name == "gamma1");
    REQUIRE(loops[1].name == "gamma2");
    REQUIRE(std::abs(loops[0].left - cplx(-0.5)) < 1e-12);
    REQUIRE(std::abs(loops[0].right - cplx(0.0)) < 1e-12);
    REQUIRE(std::abs(loops[1].left - cplx(0.0)) < 1e-12);
    REQUIRE(std::abs(loops[1].right - cplx(2.0)) < 1e-12);
    // each lifts to a closed loop in z that flips the sheet... a loop around
    // two branch points keeps it
    for (const auto& cl : loops) {
        LiftedPath lp = lift_path(dom, cl.path);
        REQUIRE(lp.closed_z);
        REQUIRE_FALSE(lp.w_flipped);
    }
}

TEST_CASE("punctured plane gets one loop per finite puncture") {
    Domain dom = Domain::punctured_plane(
        {PointOnCurve::plane(0.0), PointOnCurve::plane_infinity()});
    auto loops = canonical_loops(dom);
    REQUIRE(loops.size() == 1);
    LiftedPath lp = lift_path(dom, loops[0].path);
    REQUIRE(lp.closed_z);
}

TEST_CASE("involutions move points as advertised") {
    InvolutionSpec anti{InvolutionKind::plane_antipodal};
    SurfacePoint p{cplx(2.0, 1.0), 0.0};
    SurfacePoint q = apply_involution(anti, p);
    REQUIRE(std::abs(q.z - (-1.0 / std::conj(p.z))) < 1e-15);
    SurfacePoint back = apply_involution(anti, q);
    REQUIRE(std::abs(back.z - p.z) < 1e-15);

    InvolutionSpec curve{InvolutionKind::curve_antipodal};
    SurfacePoint c{cplx(0.5, -0.25), cplx(1.5, 0.5)};
    SurfacePoint ci = apply_involution(curve, c);
    REQUIRE(std::abs(ci.z - (-1.0 / std::conj(c.z))) < 1e-15);
    REQUIRE(std::abs(ci.w - (-1.0 / std::conj(c.w))) < 1e-15);

    // 0 and infinity swap on the compactified domain
    PointOnCurve zero = PointOnCurve::curve(0.0, 0.0);
    PointOnCurve img = apply_involution(curve, zero);
    REQUIRE(img.zk == ZKind::infinity);
}

TEST_CASE("antipodal maps have no fixed points near the unit circle") {
    REQUIRE(involution_min_displacement(InvolutionSpec{InvolutionKind::plane_antipodal}) > 0.5);
    REQUIRE(involution_min_displacement(InvolutionSpec{InvolutionKind::curve_antipodal}) > 0.5);
    REQUIRE(involution_min_displacement(InvolutionSpec{InvolutionKind::plane_conj_antipodal}) <
            0.05);
}

TEST_CASE("chart derivative matches a finite difference of the involution") {
    InvolutionSpec anti{InvolutionKind::plane_antipodal};
    cplx z(1.3, -0.6);
    cplx d = antiholomorphic_chart_derivative(anti, z);
    double eps = 1e-6;
    // antiholomorphic: I(z + e) - I(z) ~ d * conj(e)
    cplx e(eps, 0.5 * eps);
    cplx moved = apply_involution(anti, SurfacePoint{z + e, 0.0}).z;
    cplx base = apply_involution(anti, SurfacePoint{z, 0.0}).z;
    REQUIRE(std::abs((moved - base) - d * std::conj(e)) < 1e-9);
}
