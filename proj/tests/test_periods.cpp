#include <catch2/catch_amalgamated.hpp>

#include <maxface/catalog.hpp>

using namespace maxface;

namespace {

const QuadratureConfig kCfg{};

cplx loop_value(const Domain& dom, const PathSpec& path, const CurveFunction& form) {
    LiftedPath lp = lift_path(dom, path);
    return integrate_form(lp, form, kCfg).value;
}

PathSpec circle(cplx center, double radius) {
    PathSpec s;
    s.segments.push_back(Segment::arc(center, radius, radius, 0.0, 2.0 * M_PI));
    return s;
}

}  // namespace

TEST_CASE("residue theorem around the puncture") {
    Domain dom = Domain::punctured_plane(
        {PointOnCurve::plane(0.0), PointOnCurve::plane_infinity()});
    CurveFunction inv_z =
        CurveFunction::plane(ComplexRational(Poly::constant(1.0), Poly::x()));
    cplx v = loop_value(dom, circle(0.0, 1.0), inv_z);
    REQUIRE(std::abs(v - cplx(0.0, 2.0 * M_PI)) < 1e-12);

    CurveFunction one = CurveFunction::plane(ComplexRational::constant(1.0));
    REQUIRE(std::abs(loop_value(dom, circle(0.0, 1.0), one)) < 1e-12);

    REQUIRE(std::abs(residue_at(dom, inv_z, PointOnCurve::plane(0.0), kCfg) - 1.0) < 1e-12);
}

TEST_CASE("residue of the vertical form reproduces the closing obstruction") {
    WeierstrassData d = catalog::make_moebius_b2({{"r", 2.0}});
    cplx res = residue_at(d.domain, d.phi3, PointOnCurve::plane(0.0), kCfg);
    REQUIRE(std::abs(res - cplx(0.0, 3.0)) < 1e-10);
    // loop integral = 2 pi i residue = -2 pi (r^2 - 1)
    cplx v = loop_value(d.domain, canonical_loops(d.domain)[0].path, d.phi3);
    REQUIRE(std::abs(v - catalog::moebius_b2_vertical_closed(2.0)) < 1e-10);
}

TEST_CASE("genus-one degree-two family: horizontal obstruction is -4 pi s r^2") {
    for (auto [r, s] : {std::pair{0.7, 1.0}, {0.4, 2.0}, {1.3, 0.6}}) {
        WeierstrassData d = catalog::make_counter_genus1({{"r", r}, {"s", s}});
        FundamentalForms ff = fundamental_forms(d);
        cplx res = residue_at(d.domain, ff.g_phi3, PointOnCurve::plane(0.0), kCfg);
        REQUIRE(std::abs(res - cplx(0.0, s * r * r)) < 1e-9 * (1.0 + s * r * r));
        PathSpec loop = canonical_loops(d.domain)[0].path;
        cplx horizontal = loop_value(d.domain, loop, ff.g_phi3) +
                          std::conj(loop_value(d.domain, loop, ff.phi3_over_g));
        cplx target = catalog::genus1_horizontal_closed(r, s);
        REQUIRE(std::abs(horizontal - target) <= 1e-8 * std::abs(target));
    }
}

TEST_CASE("period report verdicts") {
    PeriodReport good = period_report(catalog::make_moebius_b2({{"r", 1.0}}), kCfg);
    REQUIRE(good.well_defined);
    for (const auto& L : good.loops) {
        REQUIRE(std::abs(L.horizontal) < 1e-10);
        REQUIRE(std::abs(L.vertical) < 1e-10);
    }

    PeriodReport bad = period_report(catalog::make_counter_moebius_b1({}), kCfg);
    REQUIRE_FALSE(bad.well_defined);
    REQUIRE(std::abs(bad.loops[0].horizontal - cplx(-4.0 * M_PI)) < 1e-8);

    PeriodReport kb = period_report(catalog::instantiate("klein", {{"r", 0.5}}), kCfg);
    REQUIRE_FALSE(kb.well_defined);
}

TEST_CASE("exact forms have zero periods on the double cover") {
    WeierstrassData d = catalog::make_klein(0.5);
    for (const auto& cl : canonical_loops(d.domain)) {
        REQUIRE(std::abs(loop_value(d.domain, cl.path, d.phi3)) < 1e-10);
    }
}

TEST_CASE("involution acts on homology as diag(-1, +1)") {
    WeierstrassData d = catalog::make_klein(0.5);
    auto loops = canonical_loops(d.domain);
    HomologyAction act = involution_on_homology(d.domain, d.involution, loops, kCfg);
    REQUIRE(act.residual < 1e-6);
    REQUIRE(act.matrix[0][0] == -1);
    REQUIRE(act.matrix[1][1] == 1);
    REQUIRE(act.matrix[0][1] == 0);
    REQUIRE(act.matrix[1][0] == 0);
}

TEST_CASE("conjugation identity between the two horizontal periods") {
    for (double r : {0.3, 0.5, 0.8}) {
        WeierstrassData d = catalog::make_klein(r);
        FundamentalForms ff = fundamental_forms(d);
        PathSpec g2 = canonical_loops(d.domain)[1].path;
        cplx a = loop_value(d.domain, g2, ff.g_phi3);
        cplx b = loop_value(d.domain, g2, ff.phi3_over_g);
        REQUIRE(std::abs(b - std::conj(a)) < 1e-8 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("collapsing the loop onto the cut matches the direct contour") {
    const double r = 0.5;
    WeierstrassData d = catalog::make_klein(r);
    FundamentalForms ff = fundamental_forms(d);
    const auto loops = canonical_loops(d.domain);
    cplx direct = loop_value(d.domain, loops[1].path, ff.g_phi3);

    // g phi3 = i w (z+1)^2 / z^2 dz; the exact piece d(2i w / z) removes the
    // endpoint divergence at 0
    ComplexRational s(Poly::constant(cplx(0.0, 2.0)), Poly::x());
    IntegralValue collapsed =
        regularized_cut_integral(d.domain, ff.g_phi3, s, 0.0, 1.0 / r, kCfg);
    REQUIRE(std::abs(collapsed.value - direct) < 1e-8 * (1.0 + std::abs(direct)));

    // same collapsed value against the scalar period function
    REQUIRE(std::abs(collapsed.value - 2.0 * klein_h(r)) < 1e-8);

    // the exact piece alone integrates to zero over the closed loop
    CurveFunction ds = CurveFunction::on_curve(
        d.domain.curve(), ComplexRational::zero(),
        s.derivative() + s * d.domain.curve()->derivative() / (*d.domain.curve() * cplx(2.0)));
    REQUIRE(std::abs(loop_value(d.domain, loops[1].path, ds)) < 1e-9);
}

TEST_CASE("homotopic discretizations agree") {
    WeierstrassData d = catalog::make_klein(0.5);
    FundamentalForms ff = fundamental_forms(d);
    const CanonicalLoop g2 = canonical_loops(d.domain)[1];
    // rebuild the same ellipse from four quarter arcs
    PathSpec quarters;
    const Segment& a = g2.path.segments.at(0);
    for (int q = 0; q < 4; ++q)
        quarters.segments.push_back(Segment::arc(a.center, a.rx, a.ry, a.t0 + (a.t1 - a.t0) * q / 4.0,
                                                 a.t0 + (a.t1 - a.t0) * (q + 1) / 4.0));
    cplx v1 = loop_value(d.domain, g2.path, ff.g_phi3);
    cplx v2 = loop_value(d.domain, quarters, ff.g_phi3);
    REQUIRE(std::abs(v1 - v2) < 1e-9);
}
