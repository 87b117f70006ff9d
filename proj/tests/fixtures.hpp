#ifndef PERIHOM_TEST_FIXTURES_HPP
#define PERIHOM_TEST_FIXTURES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "perihom/coefficient.hpp"
#include "perihom/torus_field.hpp"

namespace fixtures {

using perihom::CoefficientField;
using perihom::TorusField;
using perihom::cplx;

// a = diag(2 + sin 2*pi*y1, 2 + sin 2*pi*y1): effective matrix diag(sqrt(3), 2),
// corrector N^1 solvable in closed form, N^2 = 0.
inline CoefficientField laminate() {
    CoefficientField a(2);
    for (int i = 0; i < 2; ++i) {
        a.add_mode(i, i, {0, 0}, cplx(2.0, 0.0));
        a.add_real_mode(i, i, {1, 0}, cplx(0.0, -0.5)); // sin(2 pi y1)
    }
    a.validate();
    return a;
}

// Seeded band-1 field: anisotropic symmetric part around diag(2.2, 1.8) plus a
// skew part of amplitude skew_amp.  seed=1, sym_amp=0.10, skew_amp=0.9 is the
// workhorse nonsymmetric fixture (lambda in [0.72, 3.21], corrector-constant
// difference c - ctilde ~ 0.3).
inline CoefficientField random_nonsym(std::uint64_t seed, double sym_amp, double skew_amp) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CoefficientField a(2);
    const std::vector<std::vector<int>> waves = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    a.add_mode(0, 0, {0, 0}, cplx(2.2, 0.0));
    a.add_mode(1, 1, {0, 0}, cplx(1.8, 0.0));
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            for (const auto& k : waves) {
                const cplx half = sym_amp * cplx(gauss(rng), gauss(rng));
                a.add_real_mode(i, j, k, half);
                if (j != i) a.add_real_mode(j, i, k, half);
            }
    for (const auto& k : waves) {
        const cplx half = skew_amp * cplx(gauss(rng), gauss(rng));
        a.add_real_mode(0, 1, k, half);
        a.add_real_mode(1, 0, k, -half);
    }
    a.validate();
    return a;
}

// High-oscillation-contrast skew part (band 2, amplitude ~0.8 per mode) over a
// mildly perturbed symmetric part: the dyadic mean-oscillation estimate of b12
// exceeds a quarter of its sup-norm.
inline CoefficientField high_contrast_skew() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CoefficientField a(2);
    a.add_mode(0, 0, {0, 0}, cplx(2.2, 0.0));
    a.add_mode(1, 1, {0, 0}, cplx(1.8, 0.0));
    const std::vector<std::vector<int>> band1 = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            for (const auto& k : band1) {
                const cplx half = 0.08 * cplx(gauss(rng), gauss(rng));
                a.add_real_mode(i, j, k, half);
                if (j != i) a.add_real_mode(j, i, k, half);
            }
    const std::vector<std::vector<int>> band2 = {{1, 0}, {0, 1}, {1, 1}, {1, -1},
                                                 {2, 0}, {0, 2}, {2, 1}, {1, 2},
                                                 {2, 2}, {2, -1}, {1, -2}, {2, -2}};
    for (const auto& k : band2) {
        const cplx half = 0.8 * cplx(gauss(rng), gauss(rng));
        a.add_real_mode(0, 1, k, half);
        a.add_real_mode(1, 0, k, -half);
    }
    a.validate();
    return a;
}

// Unit-norm real field with power-law spectrum |fhat(k)| ~ (1+|k|)^-q over the
// full grid band: q tunes the Sobolev regularity of smoothing-estimate probes.
inline TorusField broadband(int n, double q, std::uint64_t seed) {
    TorusField f = TorusField::random_real(2, n, n / 2 - 1, 1, seed, false);
    std::vector<int> k(2);
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
        f.wavevector(idx, k.data());
        const double kk = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1]);
        f.comp(0)[idx] *= std::pow(1.0 + kk, -q);
    }
    const double nrm = perihom::l2_norm(f);
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) f.comp(0)[idx] /= nrm;
    return f;
}

} // namespace fixtures

#endif
