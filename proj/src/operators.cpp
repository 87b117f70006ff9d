#include "perihom/operators.hpp"

#include <cassert>
#include <cmath>

#include "perihom/fft.hpp"

namespace perihom {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;

std::size_t ipow(int n, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(n);
    return r;
}
} // namespace

SpectralOperator::SpectralOperator(const CoefficientField& a, int n, int m, double shift)
    : d_(a.dim()), n_(n), M_((3 * n) / 2 + ((3 * n) % 2)), m_(m), shift_(shift),
      npts_n_(ipow(n, a.dim())), npts_M_(ipow(M_, a.dim())) {
    aphys_ = a.sample_scaled(M_, m);

    map_.resize(npts_n_);
    kfac_.assign(npts_n_ * static_cast<std::size_t>(d_), 0.0);
    TorusField probe(d_, n_, 1); // only for wavevector decoding
    std::vector<int> k(static_cast<std::size_t>(d_));
    for (std::size_t idx = 0; idx < npts_n_; ++idx) {
        probe.wavevector(idx, k.data());
        std::size_t midx = 0;
        bool nyq = false;
        for (int j = 0; j < d_; ++j) {
            if (2 * std::abs(k[j]) >= n_) nyq = true;
            int i = ((k[j] % M_) + M_) % M_;
            midx = midx * static_cast<std::size_t>(M_) + static_cast<std::size_t>(i);
            kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j)] = TWO_PI * k[j];
        }
        if (nyq) {
            // Nyquist modes carry no consistent derivative; exclude them.
            for (int j = 0; j < d_; ++j) kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j)] = 0.0;
        }
        map_[idx] = midx;
    }
}

void SpectralOperator::apply(const cvec& in, cvec& out) const {
    assert(in.size() == npts_n_);
    out.assign(npts_n_, cplx(0.0, 0.0));

    std::vector<std::vector<cplx>> grad(static_cast<std::size_t>(d_));
    for (int j = 0; j < d_; ++j) {
        auto& g = grad[static_cast<std::size_t>(j)];
        g.assign(npts_M_, cplx(0.0, 0.0));
        for (std::size_t idx = 0; idx < npts_n_; ++idx) {
            const double kf = kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j)];
            if (kf != 0.0) g[map_[idx]] = cplx(0.0, kf) * in[idx];
        }
        fft_synthesis(d_, M_, g.data());
    }

    std::vector<cplx> w(npts_M_);
    for (int i = 0; i < d_; ++i) {
        for (std::size_t p = 0; p < npts_M_; ++p) w[p] = cplx(0.0, 0.0);
        for (int j = 0; j < d_; ++j) {
            const auto& aij = aphys_[static_cast<std::size_t>(i) * d_ + j];
            const auto& g = grad[static_cast<std::size_t>(j)];
            for (std::size_t p = 0; p < npts_M_; ++p) w[p] += aij[p] * g[p];
        }
        fft_analysis(d_, M_, w.data());
        for (std::size_t idx = 0; idx < npts_n_; ++idx) {
            const double kf = kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i)];
            if (kf != 0.0) out[idx] -= cplx(0.0, kf) * w[map_[idx]];
        }
    }
    if (shift_ != 0.0)
        for (std::size_t idx = 0; idx < npts_n_; ++idx) out[idx] += shift_ * in[idx];
}

TorusField SpectralOperator::flux(const TorusField& v, int j) const {
    assert(v.dim() == d_ && v.n() == n_ && v.rank() == 1);
    std::vector<std::vector<cplx>> grad(static_cast<std::size_t>(d_));
    for (int l = 0; l < d_; ++l) {
        auto& g = grad[static_cast<std::size_t>(l)];
        g.assign(npts_M_, cplx(0.0, 0.0));
        const cplx* src = v.comp(0);
        for (std::size_t idx = 0; idx < npts_n_; ++idx) {
            const double kf = kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(l)];
            if (kf != 0.0) g[map_[idx]] = cplx(0.0, kf) * src[idx];
        }
        fft_synthesis(d_, M_, g.data());
    }

    TorusField q(d_, n_, d_);
    std::vector<cplx> w(npts_M_);
    for (int i = 0; i < d_; ++i) {
        const auto& aij = aphys_[static_cast<std::size_t>(i) * d_ + j];
        for (std::size_t p = 0; p < npts_M_; ++p) w[p] = cplx(aij[p], 0.0);
        for (int l = 0; l < d_; ++l) {
            const auto& ail = aphys_[static_cast<std::size_t>(i) * d_ + l];
            const auto& g = grad[static_cast<std::size_t>(l)];
            for (std::size_t p = 0; p < npts_M_; ++p) w[p] += ail[p] * g[p];
        }
        fft_analysis(d_, M_, w.data());
        cplx* dst = q.comp(i);
        std::vector<int> k(static_cast<std::size_t>(d_));
        for (std::size_t idx = 0; idx < npts_n_; ++idx) {
            q.wavevector(idx, k.data());
            bool nyq = false;
            for (int t = 0; t < d_; ++t) nyq = nyq || 2 * std::abs(k[t]) >= n_;
            if (!nyq) dst[idx] = w[map_[idx]];
        }
    }
    return q;
}

ApplyFn SpectralOperator::apply_fn(bool project_zero) const {
    return [this, project_zero](const cvec& in, cvec& out) {
        apply(in, out);
        if (project_zero) out[0] = in[0];
    };
}

ApplyFn SpectralOperator::precond_fn(const Mat& S) const {
    std::vector<double> diag(npts_n_);
    for (std::size_t idx = 0; idx < npts_n_; ++idx) {
        double q = shift_;
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                q += S(i, j) * kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i)] *
                     kfac_[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j)];
        diag[idx] = (q > 0.0) ? 1.0 / q : 1.0; // zero mode / Nyquist: identity
    }
    return [diag](const cvec& in, cvec& out) {
        out.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = diag[i] * in[i];
    };
}

} // namespace perihom
