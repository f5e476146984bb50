#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include <maxface/catalog.hpp>
#include <maxface/immersion.hpp>

using namespace maxface;
using Catch::Matchers::ContainsSubstring;

namespace {

const ImmersionEngine& klein1_engine() {
    static ImmersionEngine e = [] {
        catalog::root_cache_path() = "test_immersion_roots.json";
        return ImmersionEngine::build(catalog::instantiate("klein-1"));
    }();
    return e;
}

double l3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

double dist3(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_CASE("build refuses data with open periods and names the loop") {
    WeierstrassData d = catalog::instantiate("klein", {{"r", cplx(0.5)}});
    try {
        ImmersionEngine::build(d);
        FAIL("expected a build error");
    } catch (const BuildError& e) {
        std::string msg = e.what();
        CHECK_THAT(msg, ContainsSubstring("periods do not close"));
        CHECK_THAT(msg, ContainsSubstring("gamma"));
    }
}

TEST_CASE("build refuses branched maps unless the demo flag is set") {
    WeierstrassData d = catalog::instantiate("henneberg-max");
    try {
        ImmersionEngine::build(d);
        FAIL("expected a build error");
    } catch (const BuildError& e) {
        std::string msg = e.what();
        CHECK_THAT(msg, ContainsSubstring("branch points"));
        CHECK_THAT(msg, ContainsSubstring("demo flag"));
    }
    ImmersionEngine eng = ImmersionEngine::build(d, {}, true);
    Vec3 at_base = eng.evaluate(eng.basepoint());
    CHECK(std::abs(at_base[0]) <= 1e-12);
    CHECK(std::abs(at_base[1]) <= 1e-12);
    CHECK(std::abs(at_base[2]) <= 1e-12);
}

TEST_CASE("catenoid immersion matches its antiderivative in closed form") {
    ImmersionEngine eng = ImmersionEngine::build(catalog::instantiate("catenoid"));

    // g = z, phi3 = dz/z from basepoint z = 2 gives
    //   X1 = Im(z + 1/z)/2, X2 = Re(z - 1/z)/2 - 3/4, X3 = log|z| - log 2.
    auto expect = [](cplx z) {
        return Vec3{0.5 * std::imag(z + 1.0 / z), 0.5 * std::real(z - 1.0 / z) - 0.75,
                    std::log(std::abs(z)) - std::log(2.0)};
    };
    for (cplx z : {cplx(1.0, 1.0), cplx(-0.3, 0.4), cplx(3.0, -2.0)}) {
        SurfacePoint p;
        p.z = z;
        Vec3 got = eng.evaluate(p);
        Vec3 want = expect(z);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(got[c] - want[c]) <= 1e-10);
    }

    SECTION("integrating along an explicit path gives the same value") {
        PathSpec spec;
        spec.segments = {Segment::line(cplx(2.0), cplx(2.0, 1.5)),
                         Segment::line(cplx(2.0, 1.5), cplx(1.0, 1.0))};
        Vec3 got = eng.evaluate_along(spec);
        Vec3 want = expect(cplx(1.0, 1.0));
        for (int c = 0; c < 3; ++c) CHECK(std::abs(got[c] - want[c]) <= 1e-10);
    }
}

TEST_CASE("two-sheet mesh mechanics on an unclosed surface") {
    // Period defects do not disturb sheet bookkeeping, so a cheap non-root
    // parameter exercises the curve-domain mesh machinery.
    WeierstrassData d = catalog::instantiate("klein", {{"r", cplx(0.5)}});
    ImmersionEngine eng = ImmersionEngine::build(d, {}, true);

    MeshOptions opt;
    opt.n_rho = 16;
    opt.n_theta = 16;
    SurfaceMesh mesh = eng.sample_mesh(opt);

    CHECK(mesh.sheets == 2);
    CHECK(mesh.vertices.size() == size_t(17) * 16 * 2);
    // Branch points at -r and 1/r fall inside the annulus; the one at 0 does
    // not. Each leaves exactly one cell with odd flip parity.
    CHECK(mesh.skipped_cells == 2);
    CHECK(mesh.quads.size() == size_t(16 * 16 - 2) * 2);

    for (const auto& v : mesh.vertices) {
        for (int c = 0; c < 3; ++c) CHECK(std::isfinite(v.pos[c]));
        CHECK(v.conformal_factor >= 0.0);
        cplx fv = d.domain.curve()->value_or_throw(v.p.z);
        CHECK(std::abs(v.p.w * v.p.w - fv) <= 1e-8 * (1.0 + std::abs(fv)));
    }
}

TEST_CASE("klein surface mesh closes up and is harmonic") {
    const ImmersionEngine& eng = klein1_engine();
    SurfaceMesh mesh = eng.sample_mesh({});

    CHECK(mesh.sheets == 2);
    CHECK(mesh.vertices.size() == size_t(65) * 64 * 2);
    CHECK(mesh.skipped_cells == 2);

    SECTION("antipodal vertex pairs land on the same point of the surface") {
        REQUIRE(mesh.involution_pairs.size() == mesh.vertices.size());
        double worst = 0.0;
        for (const auto& [i, j] : mesh.involution_pairs)
            worst = std::max(worst, dist3(mesh.vertices[i].pos, mesh.vertices[j].pos));
        CHECK(worst <= 1e-5);
    }

    SECTION("mesh vertices agree with direct evaluation") {
        for (int k : {3, 17, 40}) {
            const MeshVertex& v = mesh.vertices[mesh.index(32, k, 0)];
            Vec3 direct = eng.evaluate(v.p);
            CHECK(dist3(direct, v.pos) <= 1e-6);
        }
        const MeshVertex& flip = mesh.vertices[mesh.index(32, 9, 1)];
        Vec3 direct = eng.evaluate(flip.p);
        CHECK(dist3(direct, flip.pos) <= 1e-6);
        CHECK(dist3(flip.pos, mesh.vertices[mesh.index(32, 9, 0)].pos) > 1e-3);
    }

    SECTION("coordinates pass the discrete harmonicity screen") {
        HarmonicityReport rep = harmonicity_check(mesh, eng.data().domain.finite_branch_points());
        CHECK(rep.nodes > 0);
        CHECK(rep.ok);
    }

    SECTION("a non-harmonic field is flagged") {
        SurfaceMesh bad = mesh;
        for (auto& v : bad.vertices) v.pos[0] = std::norm(v.p.z);
        CHECK_FALSE(harmonicity_check(bad, eng.data().domain.finite_branch_points()).ok);
    }

    SECTION("sampling is deterministic") {
        SurfaceMesh again = eng.sample_mesh({});
        REQUIRE(again.vertices.size() == mesh.vertices.size());
        bool same = true;
        for (size_t i = 0; i < mesh.vertices.size(); ++i)
            for (int c = 0; c < 3; ++c)
                same = same && mesh.vertices[i].pos[c] == again.vertices[i].pos[c];
        CHECK(same);
    }
}

TEST_CASE("klein surface symmetry transforms act by isometries") {
    SymmetryCheckResult res = klein1_engine().symmetry_check(1, 40);
    CHECK(res.samples == 40);
    CHECK(res.max_deviation <= 1e-6);
}

TEST_CASE("conformal factor matches the discrete first fundamental form") {
    ImmersionEngine eng = ImmersionEngine::build(catalog::instantiate("catenoid"));
    SurfaceMesh mesh = eng.sample_mesh({});
    const int N = mesh.n_theta;
    double drho = mesh.rho_values[2] - mesh.rho_values[0];
    double dth = 2.0 * (mesh.theta_values[1] - mesh.theta_values[0]);

    // Induced metric is conformal_factor * |z|^2 (d rho^2 + d theta^2); check
    // rows away from the singular circle |z| = 1 where the factor vanishes.
    for (int j : {10, 32 + 15, 54}) {
        for (int k : {5, 20, 47}) {
            auto at = [&](int jj, int kk) { return mesh.vertices[mesh.index(jj, kk, 0)]; };
            const MeshVertex& v = at(j, k);
            Vec3 xr, xt;
            for (int c = 0; c < 3; ++c) {
                xr[c] = (at(j + 1, k).pos[c] - at(j - 1, k).pos[c]) / drho;
                xt[c] = (at(j, (k + 1) % N).pos[c] - at(j, (k + N - 1) % N).pos[c]) / dth;
            }
            double target = v.conformal_factor * std::norm(v.p.z);
            if (target < 1e-3) continue;
            CHECK(std::abs(l3(xr, xr) - target) <= 0.05 * target);
            CHECK(std::abs(l3(xt, xt) - target) <= 0.05 * target);
            CHECK(std::abs(l3(xr, xt)) <= 0.05 * target);
        }
    }
}

TEST_CASE("obj output lists every vertex and face") {
    ImmersionEngine eng = ImmersionEngine::build(catalog::instantiate("catenoid"));
    MeshOptions opt;
    opt.n_rho = 8;
    opt.n_theta = 8;
    opt.with_singular = true;
    opt.singular_grid = 48;
    SurfaceMesh mesh = eng.sample_mesh(opt);

    std::ostringstream os;
    mesh.write_obj(os);
    std::istringstream is(os.str());
    std::string line;
    size_t n_v = 0, n_f = 0;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) {
            ++n_v;
            double x, y, z;
            REQUIRE(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
            CHECK(std::isfinite(x));
        } else if (line.rfind("f ", 0) == 0) {
            ++n_f;
        }
    }
    CHECK(n_v == mesh.vertices.size());
    CHECK(n_f == mesh.quads.size());

    SECTION("singular locus sits on the height of the unit circle") {
        REQUIRE_FALSE(mesh.singular_polylines.empty());
        for (const auto& pl : mesh.singular_polylines)
            for (const Vec3& p : pl) CHECK(std::abs(p[2] + std::log(2.0)) <= 1e-6);
        nlohmann::json sj = mesh.singular_json();
        CHECK(sj.contains("polylines"));
        CHECK(!sj["polylines"].empty());
    }
}

TEST_CASE("nonorientable plane mesh pairs antipodal vertices") {
    ImmersionEngine eng =
        ImmersionEngine::build(catalog::instantiate("moebius-b2", {{"r", cplx(1.0)}}));
    MeshOptions opt;
    opt.n_rho = 32;
    opt.n_theta = 32;
    SurfaceMesh mesh = eng.sample_mesh(opt);

    CHECK(mesh.sheets == 1);
    CHECK(mesh.skipped_cells == 0);
    CHECK(mesh.vertices.size() == size_t(33) * 32);
    REQUIRE(mesh.involution_pairs.size() == mesh.vertices.size());
    double worst = 0.0;
    for (const auto& [i, j] : mesh.involution_pairs)
        worst = std::max(worst, dist3(mesh.vertices[i].pos, mesh.vertices[j].pos));
    CHECK(worst <= 1e-5);
}
