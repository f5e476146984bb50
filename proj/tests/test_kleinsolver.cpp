#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include <maxface/kleinsolver.hpp>

using namespace maxface;
using Catch::Approx;

TEST_CASE("h at reference points") {
    REQUIRE(klein_h(1.0) == Approx(-0.6482420999431045).margin(1e-9));
    REQUIRE(klein_h(0.5) == Approx(0.5065568384565398).margin(1e-9));
    REQUIRE(klein_h(1000.0) == Approx(-3.138451454).margin(1e-7));
    REQUIRE(klein_h(-1000.0) == Approx(3.144734639).margin(1e-7));
    REQUIRE_THROWS(klein_h(0.0));
}

TEST_CASE("h(1) against the Gamma-function closed form") {
    double g34 = std::tgamma(0.75);
    double target =
        -(4.0 * g34 * g34 + std::tgamma(-0.75) * std::tgamma(1.25)) / std::sqrt(2.0 * M_PI);
    REQUIRE(std::abs(klein_h(1.0) - target) <= 1e-6 * std::abs(target));
}

TEST_CASE("decomposition into the positive building blocks") {
    for (double r : {0.2, 0.5, 0.9}) {
        double a1 = klein_A1(r);
        double a2 = klein_A2(r);
        REQUIRE(a1 > 0.0);
        REQUIRE(a2 > 0.0);
        double combo =
            -2.0 * ((3.0 * r * r - 3.0 * r + 1.0) * a1 + (r - 1.0) * (r * r + 1.0) * a2);
        REQUIRE(klein_h(r) == Approx(combo).margin(1e-8));
    }
    REQUIRE_THROWS(klein_A1(-0.5));
}

TEST_CASE("h' closed combination at one half") {
    double r = 0.5;
    double combo = -2.0 * ((3.0 * r - 1.0) / r * klein_A1(r) + r * klein_A2(r));
    REQUIRE(klein_h_prime(r) == Approx(combo).margin(1e-8));
}

TEST_CASE("h' against central finite differences") {
    auto fd = [](double r, double step) {
        return (klein_h(r + step) - klein_h(r - step)) / (2.0 * step);
    };
    for (double r : {0.3, 0.5, 0.8})
        REQUIRE(std::abs(klein_h_prime(r) - fd(r, 1e-4)) <= 1e-4);
    // at r = 0.1 the plain difference carries ~1.2e-4 of truncation error
    REQUIRE(std::abs(klein_h_prime(0.1) - fd(0.1, 1e-4)) <= 2e-4);
    for (double r : {0.1, 0.3, 0.5, 0.8}) {
        double s = 2e-4 * r;
        double rich = (4.0 * fd(r, 0.5 * s) - fd(r, s)) / 3.0;
        REQUIRE(std::abs(klein_h_prime(r) - rich) <= 1e-6);
    }
}

TEST_CASE("raw and integrated-by-parts derivative integrands agree off the endpoint") {
    for (double r : {0.3, 0.5, 0.8}) {
        for (double eps : {0.02, 0.1}) {
            double raw = klein_h_prime_raw_tail(r, eps);
            double parts = klein_h_prime_byparts_tail(r, eps) + klein_h_prime_boundary(r, eps);
            REQUIRE(std::abs(raw - parts) <= 1e-7 * (1.0 + std::abs(raw)));
        }
    }
}

TEST_CASE("q evaluation, signs, and root") {
    REQUIRE(klein_q(0.2) == Approx(3.75).epsilon(1e-12));
    REQUIRE(klein_q(0.5) == Approx(-2.4).epsilon(1e-12));
    REQUIRE(klein_q(-1.0) < 0.0);
    REQUIRE_THROWS(klein_q(1.0));
    double s = klein_q_root();
    REQUIRE(s == Approx(0.31767219617198067).margin(1e-12));
    REQUIRE(std::abs(klein_q(s)) <= 1e-10);
}

TEST_CASE("brent refines a bracketed root") {
    auto f = [](double x) { return x * x - 2.0; };
    double x = brent_root(f, 1.0, 2.0, f(1.0), f(2.0), 1e-14, 0.0, 200);
    REQUIRE(std::abs(x - std::sqrt(2.0)) < 1e-13);
    REQUIRE_THROWS(brent_root(f, 2.0, 3.0, f(2.0), f(3.0), 1e-14, 0.0, 200));
}

TEST_CASE("solver finds exactly the two closing parameters") {
    RootResult res = solve_klein();
    REQUIRE(res.roots.size() == 2);
    REQUIRE(res.roots[0] == Approx(0.17137).margin(5e-4));
    REQUIRE(res.roots[1] == Approx(0.691724).margin(5e-4));
    for (double r : res.roots) REQUIRE(std::abs(klein_h(r)) <= 1e-10);
    double s = klein_q_root();
    REQUIRE(res.roots[0] < s);
    REQUIRE(s < res.roots[1]);
    // slope signs on either side of the q root
    REQUIRE(klein_h_prime(res.roots[0]) > 0.0);
    REQUIRE(klein_h_prime(res.roots[1]) < 0.0);

    KleinSolveOptions tight;
    tight.tol = 1e-12;
    REQUIRE(solve_klein(tight).roots.size() == 2);
}

TEST_CASE("solver is bitwise deterministic") {
    RootResult a = solve_klein();
    RootResult b = solve_klein();
    REQUIRE(a.roots.size() == b.roots.size());
    REQUIRE(std::memcmp(a.roots.data(), b.roots.data(), a.roots.size() * sizeof(double)) == 0);
}

TEST_CASE("quadrature depth changes are below the determinism budget") {
    QuadratureConfig deep;
    deep.abs_tol = 1e-14;
    deep.rel_tol = 1e-13;
    deep.max_panels = 40000;
    for (double r : {0.3, 0.7}) {
        REQUIRE(std::abs(klein_A1(r) - klein_A1(r, deep)) <= 1e-10);
        REQUIRE(std::abs(klein_A2(r) - klein_A2(r, deep)) <= 1e-10);
    }
}
