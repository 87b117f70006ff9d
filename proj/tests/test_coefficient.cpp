#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "perihom/coefficient.hpp"
#include "perihom/errors.hpp"

#include "fixtures.hpp"

using namespace perihom;

TEST_CASE("constant field evaluates to itself everywhere") {
    Mat m(2);
    m(0, 0) = 2.0; m(0, 1) = 1.0; m(1, 0) = -1.0; m(1, 1) = 2.0;
    CoefficientField a = CoefficientField::constant(m);
    Mat v = a.evaluate({0.3, 0.7});
    CHECK(v(0, 1) == 1.0);
    CHECK(v(1, 0) == -1.0);
}

TEST_CASE("laminate entry hits sin(pi/2) = 1 at y1 = 1/4") {
    CoefficientField a = fixtures::laminate();
    CHECK(a.evaluate({0.25, 0.0})(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
    // periodicity: evaluation wraps
    Mat v1 = a.evaluate({0.1, 0.6});
    Mat v2 = a.evaluate({1.1, -0.4});
    CHECK(v1(0, 0) == doctest::Approx(v2(0, 0)).epsilon(1e-13));
}

TEST_CASE("symmetric/skew split reproduces the field exactly") {
    CoefficientField a = fixtures::random_nonsym(3, 0.2, 0.7);
    auto [as, b] = a.split_symmetric();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y = {uni(rng), uni(rng)};
        Mat va = a.evaluate(y), vs = as.evaluate(y), vb = b.evaluate(y);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(vs(i, j) + vb(i, j) - va(i, j)) < 1e-13);
                CHECK(std::abs(vs(i, j) - vs(j, i)) < 1e-13);
                CHECK(std::abs(vb(i, j) + vb(j, i)) < 1e-13);
            }
    }
}

TEST_CASE("constant nonsymmetric matrix splits by direct algebra") {
    Mat m(2);
    m(0, 0) = 2.0; m(0, 1) = 1.0; m(1, 0) = -1.0; m(1, 1) = 2.0;
    auto [as, b] = CoefficientField::constant(m).split_symmetric();
    Mat vs = as.evaluate({0.0, 0.0}), vb = b.evaluate({0.0, 0.0});
    CHECK(vs(0, 0) == doctest::Approx(2.0));
    CHECK(vs(0, 1) == doctest::Approx(0.0));
    CHECK(vb(0, 1) == doctest::Approx(1.0));
    CHECK(vb(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("ellipticity constants of the laminate are the sample extrema") {
    CoefficientField a = fixtures::laminate();
    auto [lo, hi] = a.ellipticity_constant(64); // grid contains y1 = 1/4, 3/4
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("identity field has unit ellipticity bounds") {
    auto [lo, hi] = CoefficientField::identity(3).ellipticity_constant(8);
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("indefinite symmetric part is rejected") {
    Mat m(2);
    m(0, 0) = 1.0; m(1, 1) = -0.5;
    CHECK_THROWS_AS(CoefficientField::constant(m).ellipticity_constant(8), NonElliptic);
}

TEST_CASE("skew part never affects the ellipticity bounds") {
    CoefficientField a = fixtures::random_nonsym(11, 0.15, 0.9);
    CoefficientField as = a.split_symmetric().first;
    auto full = a.ellipticity_constant(32);
    auto sym = as.ellipticity_constant(32);
    CHECK(full.first == doctest::Approx(sym.first).epsilon(1e-12));
    CHECK(full.second == doctest::Approx(sym.second).epsilon(1e-12));
}

TEST_CASE("non-conjugate-symmetric spec is rejected") {
    CoefficientField a(2);
    a.add_mode(0, 0, {1, 0}, cplx(1.0, 0.5)); // no matching conjugate at -k
    CHECK_THROWS_AS(a.validate(), ParseError);
}

TEST_CASE("JSON round trip preserves evaluation") {
    CoefficientField a = fixtures::random_nonsym(5, 0.1, 0.5);
    CoefficientField b = CoefficientField::from_json(a.to_json());
    Mat va = a.evaluate({0.37, 0.81}), vb = b.evaluate({0.37, 0.81});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(va(i, j) == doctest::Approx(vb(i, j)).epsilon(1e-14));
}

TEST_CASE("grid-sample spec agrees with the Fourier spec it came from") {
    CoefficientField a = fixtures::laminate();
    const int n = 8;
    std::vector<double> samples;
    auto entries = a.sample_scaled(n, 1);
    for (const auto& e : entries) samples.insert(samples.end(), e.begin(), e.end());
    nlohmann::json jg;
    jg["dim"] = 2;
    jg["grid"] = {{"n", n}, {"samples", samples}};
    CoefficientField g = CoefficientField::from_json(jg);
    for (double y1 : {0.0, 0.125, 0.4375}) {
        CHECK(g.evaluate({y1, 0.2})(0, 0) == doctest::Approx(a.evaluate({y1, 0.2})(0, 0)).epsilon(1e-12));
    }
}

// ---------------------------------------------------------------------------
// dyadic mean-oscillation estimator

TEST_CASE("constant function has zero oscillation") {
    std::vector<double> g(64, 3.25);
    CHECK(bmo_seminorm(g, 2, 3) == 0.0);
}

TEST_CASE("two-level half-cell function has depth-0 oscillation 1") {
    // g = +1 on [0,1/2), -1 on [1/2,1): mean 0, mean |g - 0| = 1
    const int depth = 4, n = 1 << depth;
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g[static_cast<std::size_t>(i) * n + j] = (i < n / 2) ? 1.0 : -1.0;
    CHECK(bmo_seminorm(g, 2, depth) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("oscillation estimate is shift-invariant and degree-1 homogeneous") {
    TorusField u = TorusField::random_real(2, 16, 3, 1, 77, false);
    const double base = bmo_seminorm(u, 5);
    TorusField shifted = u;
    shifted.mode(0, {0, 0}) += cplx(4.2, 0.0);
    CHECK(bmo_seminorm(shifted, 5) == doctest::Approx(base).epsilon(1e-12));
    CHECK(bmo_seminorm(-3.0 * u, 5) == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("homothety y -> y/2 on a refined grid preserves the estimate") {
    TorusField u = TorusField::random_real(2, 16, 3, 1, 78, false);
    const double base = bmo_seminorm(u, 5);
    TorusField squeezed = rescale_oscillatory(u, 2, 64);
    // one extra depth level compensates the halved cube scale
    CHECK(bmo_seminorm(squeezed, 6) == doctest::Approx(base).epsilon(1e-10));
}
