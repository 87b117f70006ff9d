#include "perihom/torus_field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace perihom {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

std::size_t ipow(int n, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(n);
    return r;
}

// k_j of flat row-major index, symmetric range (Nyquist mapped to +n/2).
inline void idx_to_wave(std::size_t idx, int dim, int n, int* k) {
    for (int j = dim - 1; j >= 0; --j) {
        int i = static_cast<int>(idx % static_cast<std::size_t>(n));
        idx /= static_cast<std::size_t>(n);
        k[j] = (i <= n / 2) ? i : i - n;
    }
}

inline std::size_t wave_to_idx(int dim, int n, const int* k) {
    std::size_t idx = 0;
    for (int j = 0; j < dim; ++j) {
        int i = ((k[j] % n) + n) % n;
        idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    return idx;
}

} // namespace

TorusField::TorusField(int dim, int n, int rank)
    : dim_(dim), n_(n), rank_(rank), npts_(ipow(n, dim)),
      coef_(static_cast<std::size_t>(rank) * ipow(n, dim), cplx(0.0, 0.0)) {
    assert(dim >= 1 && n >= 1 && rank >= 1);
}

cplx& TorusField::mode(int c, const std::vector<int>& k) {
    return comp(c)[wave_to_idx(dim_, n_, k.data())];
}

cplx TorusField::mode(int c, const std::vector<int>& k) const {
    return comp(c)[wave_to_idx(dim_, n_, k.data())];
}

void TorusField::wavevector(std::size_t idx, int* k) const {
    idx_to_wave(idx, dim_, n_, k);
}

TorusField& TorusField::operator+=(const TorusField& o) {
    assert(dim_ == o.dim_ && n_ == o.n_ && rank_ == o.rank_);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
}

TorusField& TorusField::operator-=(const TorusField& o) {
    assert(dim_ == o.dim_ && n_ == o.n_ && rank_ == o.rank_);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    return *this;
}

TorusField& TorusField::operator*=(double s) {
    for (auto& v : coef_) v *= s;
    return *this;
}

TorusField operator+(TorusField a, const TorusField& b) { a += b; return a; }
TorusField operator-(TorusField a, const TorusField& b) { a -= b; return a; }
TorusField operator*(double s, TorusField a) { a *= s; return a; }

TorusField TorusField::random_real(int dim, int n, int band, int rank,
                                   std::uint64_t seed, bool zero_mean) {
    TorusField f(dim, n, rank);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<int> k(static_cast<std::size_t>(dim)), mk(static_cast<std::size_t>(dim));
    for (int c = 0; c < rank; ++c) {
        cplx* data = f.comp(c);
        for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
            idx_to_wave(idx, dim, n, k.data());
            bool in_band = true;
            for (int j = 0; j < dim; ++j) in_band = in_band && std::abs(k[j]) <= band;
            if (!in_band) continue;
            for (int j = 0; j < dim; ++j) mk[static_cast<std::size_t>(j)] = -k[j];
            std::size_t midx = wave_to_idx(dim, n, mk.data());
            if (midx == idx) {
                data[idx] = cplx(gauss(rng), 0.0);
            } else if (idx < midx) {
                cplx v(gauss(rng), gauss(rng));
                data[idx] = 0.5 * v;
                data[midx] = 0.5 * std::conj(v);
            }
        }
        if (zero_mean) data[0] = cplx(0.0, 0.0);
    }
    return f;
}

namespace {

double weighted_norm(const TorusField& f, int power) {
    // power: 0 -> l2, +1 -> (1+|2pik|^2), -1 -> inverse, 2 -> |2pik|^2, 4 -> |2pik|^4
    std::vector<int> k(static_cast<std::size_t>(f.dim()));
    double s = 0.0;
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
        f.wavevector(idx, k.data());
        double k2 = 0.0;
        for (int j = 0; j < f.dim(); ++j) k2 += double(k[j]) * k[j];
        k2 *= TWO_PI * TWO_PI;
        double w = 1.0;
        switch (power) {
            case 0: w = 1.0; break;
            case 1: w = 1.0 + k2; break;
            case -1: w = 1.0 / (1.0 + k2); break;
            case 2: w = k2; break;
            case 4: w = k2 * k2; break;
        }
        for (int c = 0; c < f.rank(); ++c) s += w * std::norm(f.comp(c)[idx]);
    }
    return std::sqrt(s);
}

} // namespace

double l2_norm(const TorusField& f) { return weighted_norm(f, 0); }
double h1_norm(const TorusField& f) { return weighted_norm(f, 1); }
double hminus1_norm(const TorusField& f) { return weighted_norm(f, -1); }
double grad_norm(const TorusField& f) { return weighted_norm(f, 2); }
double hessian_norm(const TorusField& f) { return weighted_norm(f, 4); }

double l2_inner(const TorusField& a, const TorusField& b) {
    assert(a.dim() == b.dim() && a.n() == b.n() && a.rank() == b.rank());
    double s = 0.0;
    for (int c = 0; c < a.rank(); ++c) {
        const cplx* pa = a.comp(c);
        const cplx* pb = b.comp(c);
        for (std::size_t i = 0; i < a.npoints(); ++i)
            s += std::real(std::conj(pa[i]) * pb[i]);
    }
    return s;
}

double mean(const TorusField& f, int c) { return std::real(f.comp(c)[0]); }

TorusField derivative(const TorusField& f, int axis) {
    TorusField g(f.dim(), f.n(), f.rank());
    std::vector<int> k(static_cast<std::size_t>(f.dim()));
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
        f.wavevector(idx, k.data());
        // Nyquist derivative of a real field has no consistent sign; zero it.
        double kk = (2 * k[axis] == f.n()) ? 0.0 : double(k[axis]);
        cplx factor(0.0, TWO_PI * kk);
        for (int c = 0; c < f.rank(); ++c) g.comp(c)[idx] = factor * f.comp(c)[idx];
    }
    return g;
}

TorusField gradient(const TorusField& f) {
    assert(f.rank() == 1);
    TorusField g(f.dim(), f.n(), f.dim());
    for (int axis = 0; axis < f.dim(); ++axis) {
        TorusField d = derivative(f, axis);
        std::copy(d.comp(0), d.comp(0) + f.npoints(), g.comp(axis));
    }
    return g;
}

TorusField divergence(const TorusField& v) {
    assert(v.rank() == v.dim());
    TorusField g(v.dim(), v.n(), 1);
    std::vector<int> k(static_cast<std::size_t>(v.dim()));
    for (std::size_t idx = 0; idx < v.npoints(); ++idx) {
        v.wavevector(idx, k.data());
        cplx s(0.0, 0.0);
        for (int j = 0; j < v.dim(); ++j) {
            double kk = (2 * k[j] == v.n()) ? 0.0 : double(k[j]);
            s += cplx(0.0, TWO_PI * kk) * v.comp(j)[idx];
        }
        g.comp(0)[idx] = s;
    }
    return g;
}

TorusField resample(const TorusField& f, int n_new) {
    if (n_new == f.n()) return f;
    TorusField g(f.dim(), n_new, f.rank());
    std::vector<int> k(static_cast<std::size_t>(f.dim()));
    const int bound = std::min(f.n(), n_new); // strict: |k_j| < bound/2
    for (std::size_t idx = 0; idx < g.npoints(); ++idx) {
        g.wavevector(idx, k.data());
        bool ok = true;
        for (int j = 0; j < f.dim(); ++j) ok = ok && 2 * std::abs(k[j]) < bound;
        if (!ok) continue;
        std::size_t src = wave_to_idx(f.dim(), f.n(), k.data());
        for (int c = 0; c < f.rank(); ++c) g.comp(c)[idx] = f.comp(c)[src];
    }
    return g;
}

TorusField rescale_oscillatory(const TorusField& f, int m, int n_target) {
    TorusField g(f.dim(), n_target, f.rank());
    std::vector<int> k(static_cast<std::size_t>(f.dim())), mk(static_cast<std::size_t>(f.dim()));
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
        f.wavevector(idx, k.data());
        bool ok = true;
        for (int j = 0; j < f.dim(); ++j) {
            ok = ok && 2 * std::abs(k[j]) < f.n(); // drop source Nyquist
            mk[static_cast<std::size_t>(j)] = m * k[j];
            ok = ok && 2 * std::abs(mk[static_cast<std::size_t>(j)]) < n_target;
        }
        if (!ok) continue;
        std::size_t dst = wave_to_idx(f.dim(), n_target, mk.data());
        for (int c = 0; c < f.rank(); ++c) g.comp(c)[dst] = f.comp(c)[idx];
    }
    return g;
}

TorusField multiply(const TorusField& a, const TorusField& b, int n_out) {
    assert(a.dim() == b.dim() && a.n() == b.n());
    const int d = a.dim();
    const int n = a.n();
    const int M = (3 * n) / 2 + ((3 * n) % 2); // 3/2-rule padded grid
    int out_rank;
    if (a.rank() == 1 && b.rank() == 1) out_rank = 1;
    else if (b.rank() == 1) out_rank = a.rank();
    else if (a.rank() == 1) out_rank = b.rank();
    else { assert(a.rank() == b.rank()); out_rank = 1; }

    TorusField ap = resample(a, M), bp = resample(b, M);
    std::vector<std::vector<cplx>> aphys(static_cast<std::size_t>(ap.rank()));
    std::vector<std::vector<cplx>> bphys(static_cast<std::size_t>(bp.rank()));
    for (int c = 0; c < ap.rank(); ++c) {
        aphys[static_cast<std::size_t>(c)].assign(ap.comp(c), ap.comp(c) + ap.npoints());
        fft_synthesis(d, M, aphys[static_cast<std::size_t>(c)].data());
    }
    for (int c = 0; c < bp.rank(); ++c) {
        bphys[static_cast<std::size_t>(c)].assign(bp.comp(c), bp.comp(c) + bp.npoints());
        fft_synthesis(d, M, bphys[static_cast<std::size_t>(c)].data());
    }

    TorusField prod(d, M, out_rank);
    std::vector<cplx> buf(ap.npoints());
    auto emit = [&](int cout, const std::vector<cplx>& x, const std::vector<cplx>& y, bool accumulate) {
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = x[i] * y[i];
        fft_analysis(d, M, buf.data());
        cplx* dst = prod.comp(cout);
        if (accumulate)
            for (std::size_t i = 0; i < buf.size(); ++i) dst[i] += buf[i];
        else
            std::copy(buf.begin(), buf.end(), dst);
    };
    if (a.rank() == 1 && b.rank() == 1) {
        emit(0, aphys[0], bphys[0], false);
    } else if (b.rank() == 1) {
        for (int c = 0; c < a.rank(); ++c) emit(c, aphys[static_cast<std::size_t>(c)], bphys[0], false);
    } else if (a.rank() == 1) {
        for (int c = 0; c < b.rank(); ++c) emit(c, aphys[0], bphys[static_cast<std::size_t>(c)], false);
    } else {
        for (int c = 0; c < a.rank(); ++c)
            emit(0, aphys[static_cast<std::size_t>(c)], bphys[static_cast<std::size_t>(c)], c != 0);
    }
    return resample(prod, n_out);
}

std::vector<double> to_physical(const TorusField& f) {
    std::vector<double> out(static_cast<std::size_t>(f.rank()) * f.npoints());
    std::vector<cplx> buf(f.npoints());
    for (int c = 0; c < f.rank(); ++c) {
        std::copy(f.comp(c), f.comp(c) + f.npoints(), buf.begin());
        fft_synthesis(f.dim(), f.n(), buf.data());
        for (std::size_t i = 0; i < f.npoints(); ++i)
            out[static_cast<std::size_t>(c) * f.npoints() + i] = std::real(buf[i]);
    }
    return out;
}

TorusField from_physical(int dim, int n, int rank, const std::vector<double>& values) {
    TorusField f(dim, n, rank);
    if (values.size() != static_cast<std::size_t>(rank) * f.npoints())
        throw std::invalid_argument("from_physical: size mismatch");
    for (int c = 0; c < rank; ++c) {
        cplx* dst = f.comp(c);
        for (std::size_t i = 0; i < f.npoints(); ++i)
            dst[i] = cplx(values[static_cast<std::size_t>(c) * f.npoints() + i], 0.0);
        fft_analysis(dim, n, dst);
    }
    return f;
}

double sup_norm(const TorusField& f) {
    std::vector<double> phys = to_physical(f);
    double m = 0.0;
    for (std::size_t i = 0; i < f.npoints(); ++i) {
        double s = 0.0;
        for (int c = 0; c < f.rank(); ++c) {
            double v = phys[static_cast<std::size_t>(c) * f.npoints() + i];
            s += v * v;
        }
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

} // namespace perihom
