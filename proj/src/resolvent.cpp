#include "perihom/resolvent.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "perihom/errors.hpp"
#include "perihom/krylov.hpp"
#include "perihom/operators.hpp"
#include "perihom/steklov.hpp"

namespace perihom {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;
constexpr int RESOLVENT_ITER_CAP = 20000;

int eps_denominator(double eps) {
    if (eps <= 0.0) throw BadEps(eps);
    const double inv = 1.0 / eps;
    const int m = static_cast<int>(std::lround(inv));
    if (m < 1 || std::abs(inv - m) > 1e-9 * inv) throw IncommensurateEps(eps);
    return m;
}

} // namespace

TorusField solve_resolvent(const CoefficientField& a, double eps, const TorusField& f,
                           int n, double tol, bool adjoint, SolveStats* stats) {
    const int m = eps_denominator(eps);
    if (n <= 2 * m * a.band()) {
        std::ostringstream msg;
        msg << "grid " << n << " cannot resolve coefficient oscillation at scale 1/" << m
            << " (band " << a.band() << ")";
        throw GridTooCoarse(msg.str());
    }
    const CoefficientField field = adjoint ? a.transpose() : a;
    SpectralOperator op(field, n, m, 1.0);
    const ApplyFn A = op.apply_fn(/*project_zero=*/false);
    const ApplyFn P = op.precond_fn(field.mean().sym());

    TorusField fr = resample(f, n);
    cvec b(fr.comp(0), fr.comp(0) + fr.npoints());
    cvec x(b.size(), cplx(0.0, 0.0));
    KrylovResult kr = field.is_symmetric() ? pcg(A, P, b, x, tol, RESOLVENT_ITER_CAP)
                                           : bicgstab(A, P, b, x, tol, RESOLVENT_ITER_CAP);
    if (!kr.converged) throw NoConvergence(kr.iterations, kr.rel_residual);

    TorusField u(f.dim(), n, 1);
    std::copy(x.begin(), x.end(), u.comp(0));
    if (stats) {
        stats->iterations = kr.iterations;
        stats->rel_residual = kr.rel_residual;
        stats->f_l2 = l2_norm(fr);
        stats->u_l2 = l2_norm(u);
        stats->grad_u_l2 = grad_norm(u);
    }
    return u;
}

TorusField solve_homogenized(const Mat& a0, const TorusField& f, bool adjoint) {
    const Mat s = (adjoint ? a0.transpose() : a0).sym();
    auto eig = sym_eig_range(s);
    if (eig.first <= 0.0) throw NonElliptic(eig.first);

    TorusField u = f;
    const int d = f.dim();
    std::vector<int> k(static_cast<std::size_t>(d));
    for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
        u.wavevector(idx, k.data());
        double q = 1.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                q += s(i, j) * (TWO_PI * k[static_cast<std::size_t>(i)]) *
                     (TWO_PI * k[static_cast<std::size_t>(j)]);
        for (int c = 0; c < f.rank(); ++c) u.comp(c)[idx] /= q;
    }
    return u;
}

FirstOrderApprox first_order_approx(const TorusField& u0, const CellCorrectors& correctors,
                                    double eps, bool smoothing, int n) {
    const int m = eps_denominator(eps);
    const int d = u0.dim();
    if (n < u0.n())
        throw GridTooCoarse("approximation grid coarser than homogenized solution grid");

    TorusField ur = resample(u0, n);
    // the leading term stays unsmoothed; smoothing only regularizes the
    // gradient factor multiplying the oscillatory corrector
    TorusField us = smoothing ? steklov_apply(ur, eps) : ur;

    FirstOrderApprox out;
    out.value = ur;
    out.grad = gradient(ur);
    for (int j = 0; j < d; ++j) {
        TorusField Nj = rescale_oscillatory(correctors.N[static_cast<std::size_t>(j)], m, n);
        TorusField dju = derivative(us, j);
        out.value += eps * multiply(Nj, dju, n);
        for (int i = 0; i < d; ++i) {
            TorusField diNj = rescale_oscillatory(
                derivative(correctors.N[static_cast<std::size_t>(j)], i), m, n);
            // (d_i N^j)(x/eps) carries a 1/eps from the chain rule that the
            // eps prefactor of the corrector cancels.
            TorusField gi = multiply(diNj, dju, n) + eps * multiply(Nj, derivative(dju, i), n);
            cplx* dst = out.grad.comp(i);
            const cplx* src = gi.comp(0);
            for (std::size_t p = 0; p < gi.npoints(); ++p) dst[p] += src[p];
        }
    }
    return out;
}

TorusField third_order_term(const TorusField& f, const CellSolution& cell,
                            double eps, LSign sign, int n) {
    const int d = f.dim();
    const CorrectorConstants& cc = cell.hom.constants;
    TorusField v = solve_homogenized(cell.hom.a0, resample(f, n));

    // dc_i^{jk} d_j d_i d_k v as one Fourier multiplier pass.
    TorusField w(d, n, 1);
    std::vector<int> k(static_cast<std::size_t>(d));
    for (std::size_t idx = 0; idx < v.npoints(); ++idx) {
        v.wavevector(idx, k.data());
        double coef = 0.0;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                for (int kk = 0; kk < d; ++kk) {
                    const double dc = cc.at(false, j, kk, i) - cc.at(true, j, kk, i);
                    const double signed_dc = (sign == LSign::Paper3250) ? dc : -dc;
                    coef += signed_dc * (TWO_PI * k[static_cast<std::size_t>(j)]) *
                            (TWO_PI * k[static_cast<std::size_t>(i)]) *
                            (TWO_PI * k[static_cast<std::size_t>(kk)]);
                }
        // (i t_j)(i t_i)(i t_k) = -i t_j t_i t_k
        w.comp(0)[idx] = cplx(0.0, -coef) * v.comp(0)[idx];
    }
    return eps * solve_homogenized(cell.hom.a0, w);
}

TorusField second_order_approx(const TorusField& f, const CellSolution& cell,
                               double eps, const SecondOrderOptions& opt, int n) {
    const int m = eps_denominator(eps);
    const int d = f.dim();
    TorusField fr = resample(f, n);
    TorusField u = solve_homogenized(cell.hom.a0, fr);

    // eps K_eps f = eps N_eps . S^eps grad u
    TorusField result = u;
    TorusField us = opt.smoothing ? steklov_apply(u, eps) : u;
    for (int j = 0; j < d; ++j) {
        TorusField Nj = rescale_oscillatory(cell.primal.N[static_cast<std::size_t>(j)], m, n);
        result += eps * multiply(Nj, derivative(us, j), n);
    }

    if (opt.include_adjoint_term) {
        // eps (Ktilde_eps)^* f = -eps (A0+1)^-1 S^eps div(Ntilde_eps f)
        TorusField w(d, n, d);
        for (int j = 0; j < d; ++j) {
            TorusField Nj = rescale_oscillatory(cell.adjoint.N[static_cast<std::size_t>(j)], m, n);
            TorusField wj = multiply(Nj, fr, n);
            std::copy(wj.comp(0), wj.comp(0) + wj.npoints(), w.comp(j));
        }
        TorusField divw = divergence(w);
        if (opt.smoothing) divw = steklov_apply(divw, eps);
        result += (-eps) * solve_homogenized(cell.hom.a0, divw);
    }

    if (opt.include_third_order)
        result += third_order_term(fr, cell, eps, opt.sign, n);

    return result;
}

} // namespace perihom
