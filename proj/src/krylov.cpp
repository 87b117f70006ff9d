#include "perihom/krylov.hpp"

#include <cmath>

namespace perihom {

namespace {

using cplx = std::complex<double>;

cplx cdot(const cvec& a, const cvec& b) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double pnorm(const ApplyFn& P, const cvec& r, cvec& scratch) {
    P(r, scratch);
    return std::sqrt(std::abs(cdot(r, scratch)));
}

void axpy(cvec& y, cplx a, const cvec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

} // namespace

KrylovResult pcg(const ApplyFn& A, const ApplyFn& P, const cvec& b, cvec& x,
                 double tol, int max_iter) {
    const std::size_t n = b.size();
    cvec r(n), z(n), p(n), q(n);
    A(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    P(r, z);
    p = z;
    double rz = std::real(cdot(r, z));
    cvec scratch(n);
    const double bnorm = pnorm(P, b, scratch);
    KrylovResult res;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
        res.converged = true;
        return res;
    }
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        A(p, q);
        const double pq = std::real(cdot(p, q));
        if (pq <= 0.0) break;
        const double alpha = rz / pq;
        axpy(x, alpha, p);
        axpy(r, -alpha, q);
        P(r, z);
        const double rz_new = std::real(cdot(r, z));
        res.rel_residual = std::sqrt(std::max(0.0, rz_new)) / bnorm;
        if (res.rel_residual <= tol) {
            res.converged = true;
            return res;
        }
        const double beta = rz_new / rz;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rz = rz_new;
    }
    return res;
}

KrylovResult bicgstab(const ApplyFn& A, const ApplyFn& P, const cvec& b, cvec& x,
                      double tol, int max_iter) {
    const std::size_t n = b.size();
    cvec r(n), rhat(n), p(n, cplx(0, 0)), v(n, cplx(0, 0)), s(n), t(n), phat(n), shat(n), q(n);
    A(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    rhat = r;
    cplx rho(1, 0), alpha(1, 0), omega(1, 0);
    cvec scratch(n);
    const double bnorm = pnorm(P, b, scratch);
    KrylovResult res;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
        res.converged = true;
        return res;
    }
    res.rel_residual = pnorm(P, r, scratch) / bnorm;
    if (res.rel_residual <= tol) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        const cplx rho_new = cdot(rhat, r);
        if (std::abs(rho_new) < 1e-300) break;
        const cplx beta = (rho_new / rho) * (alpha / omega);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        P(p, phat);
        A(phat, v);
        const cplx denom = cdot(rhat, v);
        if (std::abs(denom) < 1e-300) break;
        alpha = rho_new / denom;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        P(s, shat);
        A(shat, t);
        const cplx tt = cdot(t, t);
        if (std::abs(tt) < 1e-300) {
            axpy(x, alpha, phat);
            for (std::size_t i = 0; i < n; ++i) r[i] = s[i];
        } else {
            omega = cdot(t, s) / tt;
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
            for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        }
        res.rel_residual = pnorm(P, r, scratch) / bnorm;
        if (res.rel_residual <= tol) {
            res.converged = true;
            return res;
        }
        rho = rho_new;
        if (std::abs(omega) < 1e-300) break;
    }
    return res;
}

} // namespace perihom
