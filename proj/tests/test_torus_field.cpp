#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perihom/torus_field.hpp"

#include "fixtures.hpp"

using namespace perihom;

namespace {
constexpr double PI = 3.14159265358979323846264338328;
}

TEST_CASE("single cosine mode has closed-form Sobolev norms") {
    // u = cos(2 pi x1) on [0,1)^2
    TorusField u(2, 16, 1);
    u.mode(0, {1, 0}) = cplx(0.5, 0.0);
    u.mode(0, {-1, 0}) = cplx(0.5, 0.0);
    const double w = 1.0 + 4.0 * PI * PI;
    CHECK(l2_norm(u) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(h1_norm(u) == doctest::Approx(std::sqrt(w / 2.0)).epsilon(1e-13));
    CHECK(hminus1_norm(u) == doctest::Approx(1.0 / std::sqrt(2.0 * w)).epsilon(1e-13));
    CHECK(grad_norm(u) == doctest::Approx(2.0 * PI / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("Parseval: grid quadrature of |u|^2 matches coefficient norm") {
    TorusField u = TorusField::random_real(2, 16, 7, 1, 99, false);
    std::vector<double> phys = to_physical(u);
    double s = 0.0;
    for (double v : phys) s += v * v;
    s /= static_cast<double>(phys.size());
    CHECK(std::sqrt(s) == doctest::Approx(l2_norm(u)).epsilon(1e-12));
}

TEST_CASE("random_real is real-valued in physical space") {
    TorusField u = TorusField::random_real(3, 8, 3, 2, 123, true);
    // conjugate symmetry means physical samples reconstruct the coefficients
    TorusField back = from_physical(3, 8, 2, to_physical(u));
    CHECK(l2_norm(back - u) < 1e-13);
    CHECK(std::abs(mean(u, 0)) == 0.0);
    CHECK(std::abs(mean(u, 1)) == 0.0);
}

TEST_CASE("derivative is the exact multiplier and kills constants") {
    TorusField u(2, 8, 1);
    u.mode(0, {0, 0}) = cplx(3.0, 0.0);
    u.mode(0, {2, 1}) = cplx(0.25, -0.125);
    u.mode(0, {-2, -1}) = cplx(0.25, 0.125);
    TorusField du = derivative(u, 0);
    CHECK(std::abs(du.mode(0, {0, 0})) == 0.0);
    CHECK(du.mode(0, {2, 1}) == cplx(0.0, 2.0 * 2.0 * PI) * u.mode(0, {2, 1}));
    // d/dx1 cos(4 pi x1) style pair stays conjugate-symmetric
    CHECK(std::abs(du.mode(0, {-2, -1}) - std::conj(du.mode(0, {2, 1}))) < 1e-15);
}

TEST_CASE("gradient/divergence compose to the (negative) Laplacian") {
    TorusField u = TorusField::random_real(2, 16, 5, 1, 4, false);
    TorusField lap = divergence(gradient(u));
    std::vector<int> k(2);
    for (std::size_t idx = 0; idx < u.npoints(); ++idx) {
        u.wavevector(idx, k.data());
        if (2 * std::abs(k[0]) >= 16 || 2 * std::abs(k[1]) >= 16) continue;
        const double k2 = 4.0 * PI * PI * (double(k[0]) * k[0] + double(k[1]) * k[1]);
        CHECK(std::abs(lap.comp(0)[idx] + k2 * u.comp(0)[idx]) < 1e-12);
    }
}

TEST_CASE("dealiased product of band-limited fields is exact") {
    // (cos a.x)(cos b.x) has only modes a+b and a-b
    TorusField u(2, 16, 1), v(2, 16, 1);
    u.mode(0, {3, 1}) = cplx(0.5, 0.0);
    u.mode(0, {-3, -1}) = cplx(0.5, 0.0);
    v.mode(0, {2, -1}) = cplx(0.5, 0.0);
    v.mode(0, {-2, 1}) = cplx(0.5, 0.0);
    TorusField p = multiply(u, v, 16);
    CHECK(std::real(p.mode(0, {5, 0})) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(p.mode(0, {1, 2})) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(p.mode(0, {0, 0})) < 1e-15);
}

TEST_CASE("product aliasing does not contaminate retained modes") {
    TorusField u = TorusField::random_real(2, 16, 7, 1, 21, false);
    TorusField v = TorusField::random_real(2, 16, 7, 1, 22, false);
    // ground truth on a grid large enough to hold the full product band
    TorusField big = multiply(resample(u, 64), resample(v, 64), 64);
    TorusField small = multiply(u, v, 16);
    TorusField diff = resample(big, 16) - small;
    CHECK(l2_norm(diff) < 1e-13);
}

TEST_CASE("resample round-trips and drops Nyquist content") {
    TorusField u = TorusField::random_real(2, 16, 7, 1, 5, false);
    TorusField up = resample(u, 32);
    CHECK(l2_norm(resample(up, 16) - u) < 1e-14);
    CHECK(l2_norm(up) == doctest::Approx(l2_norm(u)).epsilon(1e-13));
}

TEST_CASE("rescale_oscillatory moves mode k to m k") {
    TorusField u(2, 8, 1);
    u.mode(0, {1, 1}) = cplx(0.5, 0.25);
    u.mode(0, {-1, -1}) = cplx(0.5, -0.25);
    TorusField v = rescale_oscillatory(u, 4, 32);
    CHECK(std::abs(v.mode(0, {4, 4}) - cplx(0.5, 0.25)) < 1e-15);
    CHECK(std::abs(v.mode(0, {1, 1})) == 0.0);
    // physical check at a sample point: v(x) = u(4x)
    std::vector<double> pu = to_physical(u);
    std::vector<double> pv = to_physical(v);
    CHECK(pv[0] == doctest::Approx(pu[0]).epsilon(1e-12));
}

TEST_CASE("vector-vector multiply contracts to a dot product") {
    TorusField a = TorusField::random_real(2, 16, 3, 2, 31, false);
    TorusField b = TorusField::random_real(2, 16, 3, 2, 32, false);
    TorusField dot = multiply(a, b, 16);
    CHECK(dot.rank() == 1);
    const double direct = l2_inner(a, b); // zero mode of the dot product
    CHECK(mean(dot) == doctest::Approx(direct).epsilon(1e-12));
}
