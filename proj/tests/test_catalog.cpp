#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <maxface/catalog.hpp>

using namespace maxface;

TEST_CASE("registry lists every surface with consistent metadata") {
    std::vector<std::string> ns = catalog::names();
    REQUIRE(ns.size() == 11);
    for (const char* n :
         {"catenoid", "moebius-b2", "moebius-k", "moebius-family", "moebius-sym",
          "henneberg-max", "klein", "klein-1", "klein-2", "counter-genus1-deg2",
          "counter-moebius-b1"})
        CHECK(catalog::known(n));
    CHECK_FALSE(catalog::known("helicoid"));
    CHECK_THROWS_AS(catalog::info("helicoid"), std::invalid_argument);

    CHECK(catalog::info("henneberg-max").demo_only);
    CHECK_FALSE(catalog::info("catenoid").nonorientable);
    CHECK(catalog::info("klein").nonorientable);
    CHECK_FALSE(catalog::info("klein").params.empty());
}

TEST_CASE("every registry entry instantiates") {
    catalog::root_cache_path() = "test_catalog_roots.json";
    for (const std::string& name : catalog::names()) {
        WeierstrassData d = catalog::instantiate(name);
        INFO(name);
        CHECK_FALSE(d.label.empty());
        CHECK(d.nonorientable() == catalog::info(name).nonorientable);
    }
    CHECK(catalog::instantiate("klein-1").label == "klein-1");
    CHECK(catalog::instantiate("klein-2").label == "klein-2");
}

TEST_CASE("check reports match the reference table") {
    struct Row {
        const char* name;
        catalog::ParamMap p;
    };
    const Row rows[] = {
        {"catenoid", {}},
        {"moebius-b2", {{"r", cplx(1.0)}}},
        {"moebius-b2", {{"r", cplx(2.0)}}},
        {"moebius-k", {{"k", cplx(2.0)}}},
        {"moebius-sym", {}},
        {"klein", {{"r", cplx(0.5)}}},
        {"counter-genus1-deg2", {}},
        {"counter-moebius-b1", {}},
    };
    for (const Row& row : rows) {
        INFO(row.name);
        WeierstrassData d = catalog::instantiate(row.name, row.p);
        CheckReport rep = run_check(d);
        catalog::Expected exp = catalog::expected_info(row.name, row.p);

        CHECK(rep.json.at("verdict").get<std::string>() == exp.verdict);
        CHECK(rep.well_defined == (exp.verdict == "well-defined"));
        CHECK(rep.json.at("deg_g").get<int>() == exp.deg_g);

        std::vector<int> mu;
        for (const auto& e : rep.json.at("ends")) mu.push_back(e.at("mu").get<int>());
        std::sort(mu.begin(), mu.end());
        std::sort(exp.mu.begin(), exp.mu.end());
        CHECK(mu == exp.mu);
    }
}

TEST_CASE("topology residual vanishes on the balanced models") {
    struct Row {
        const char* name;
        catalog::ParamMap p;
    };
    const Row rows[] = {
        {"catenoid", {}}, {"moebius-b2", {}}, {"moebius-k", {{"k", cplx(2.0)}}},
        {"moebius-sym", {}}, {"klein", {{"r", cplx(0.5)}}},
    };
    for (const Row& row : rows) {
        INFO(row.name);
        WeierstrassData d = catalog::instantiate(row.name, row.p);
        CheckReport rep = run_check(d);
        CHECK(rep.json.at("jm_residual").get<int>() == 0);
        if (d.nonorientable())
            CHECK(rep.json.at("jm_residual_quotient").get<int>() == 0);
    }
}

TEST_CASE("check output is stable across runs") {
    for (const char* name : {"moebius-sym", "klein"}) {
        WeierstrassData d = catalog::instantiate(name);
        std::string a = run_check(d).json.dump();
        std::string b = run_check(d).json.dump();
        INFO(name);
        CHECK(a == b);
    }
}

TEST_CASE("weierstrass data survives a serialization round trip") {
    SECTION("plane model") {
        WeierstrassData d = catalog::instantiate("moebius-b2");
        WeierstrassData d2 = weierstrass_from_json(data_to_json(d));
        CHECK(d2.label == d.label);
        CHECK(d2.chi_double_cover == d.chi_double_cover);
        CHECK(d2.chi_quotient == d.chi_quotient);
        CHECK(d2.involution.kind == d.involution.kind);
        for (cplx z : {cplx(0.7, 0.2), cplx(-1.3, 0.5), cplx(0.1, -2.0)}) {
            CHECK(std::abs(d2.g.eval(z, 0.0) - d.g.eval(z, 0.0)) <= 1e-14);
            CHECK(std::abs(d2.phi3.eval(z, 0.0) - d.phi3.eval(z, 0.0)) <= 1e-14);
        }
    }
    SECTION("curve model") {
        WeierstrassData d = catalog::instantiate("klein", {{"r", cplx(0.31)}});
        nlohmann::json j = data_to_json(d);
        CHECK(j.at("involution").get<std::string>() == "antipodal");
        WeierstrassData d2 = weierstrass_from_json(j);
        CHECK(d2.domain.finite_branch_points() == d.domain.finite_branch_points());
        for (const SurfacePoint& p : domain_samples(d.domain, 6)) {
            CHECK(std::abs(d2.g.eval(p.z, p.w) - d.g.eval(p.z, p.w)) <= 1e-12);
            CHECK(std::abs(d2.phi3.eval(p.z, p.w) - d.phi3.eval(p.z, p.w)) <= 1e-12);
        }
    }
}

TEST_CASE("root cache round trip and recovery") {
    const std::string path = "test_catalog_cache_rt.json";
    catalog::root_cache_path() = path;
    std::remove(path.c_str());

    catalog::KleinRoots fresh = catalog::klein_roots();
    CHECK_FALSE(fresh.from_cache);
    CHECK(std::abs(fresh.r1 - 0.17137) <= 5e-4);
    CHECK(std::abs(fresh.r2 - 0.691724) <= 5e-4);

    catalog::KleinRoots cached = catalog::klein_roots();
    CHECK(cached.from_cache);
    CHECK(cached.r1 == fresh.r1);
    CHECK(cached.r2 == fresh.r2);

    {
        std::ofstream of(path);
        of << "{broken";
    }
    catalog::KleinRoots recovered = catalog::klein_roots();
    CHECK_FALSE(recovered.from_cache);
    CHECK(std::abs(recovered.r1 - fresh.r1) <= 1e-9);

    catalog::KleinRoots again = catalog::klein_roots();
    CHECK(again.from_cache);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(catalog::instantiate("nope"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::expected_info("nope"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("moebius-k", {{"k", cplx(0.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("moebius-k", {{"k", cplx(9.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("moebius-b2", {{"r", cplx(-1.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("moebius-b2", {{"r", cplx(1.0, 0.5)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("moebius-family", {{"s", cplx(0.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("klein", {{"r", cplx(1.0)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(catalog::instantiate("klein", {{"r", cplx(0.0)}}),
                    std::invalid_argument);
}
