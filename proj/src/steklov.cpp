#include "perihom/steklov.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perihom/errors.hpp"

namespace perihom {

namespace {

constexpr double PI = 3.14159265358979323846264338328;

double sinc(double t) {
    if (std::abs(t) < 1e-12) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

// Largest |k|_inf carrying a nonzero coefficient.
int field_band(const TorusField& f) {
    int band = 0;
    std::vector<int> k(static_cast<std::size_t>(f.dim()));
    for (int c = 0; c < f.rank(); ++c)
        for (std::size_t idx = 0; idx < f.npoints(); ++idx) {
            if (std::abs(f.comp(c)[idx]) == 0.0) continue;
            f.wavevector(idx, k.data());
            for (int j = 0; j < f.dim(); ++j) band = std::max(band, std::abs(k[j]));
        }
    return band;
}

int eps_denominator(double eps) {
    if (eps <= 0.0) throw BadEps(eps);
    const double inv = 1.0 / eps;
    const int m = static_cast<int>(std::lround(inv));
    if (m < 1 || std::abs(inv - m) > 1e-9 * inv) throw IncommensurateEps(eps);
    return m;
}

double mean_product(const TorusField& a, const TorusField& b) {
    return mean(multiply(a, b, a.n()));
}

} // namespace

TorusField steklov_apply(const TorusField& u, double eps) {
    if (eps <= 0.0) throw BadEps(eps);
    TorusField out = u;
    std::vector<int> k(static_cast<std::size_t>(u.dim()));
    for (std::size_t idx = 0; idx < u.npoints(); ++idx) {
        out.wavevector(idx, k.data());
        double s = 1.0;
        for (int j = 0; j < u.dim(); ++j) s *= sinc(PI * eps * k[static_cast<std::size_t>(j)]);
        for (int c = 0; c < u.rank(); ++c) out.comp(c)[idx] *= s;
    }
    return out;
}

FieldNorms norms(const TorusField& u) {
    FieldNorms n;
    n.l2 = l2_norm(u);
    n.h1 = h1_norm(u);
    n.hminus1 = hminus1_norm(u);
    return n;
}

LemmaResult lemma_evaluator(LemmaKind kind, const LemmaInputs& in, double eps) {
    if (eps <= 0.0) throw BadEps(eps);
    LemmaResult r;

    // Smoothing-only estimates: no periodic factor, any eps in (0, 1].
    if (kind == LemmaKind::M2 || kind == LemmaKind::M3 || kind == LemmaKind::M7) {
        TorusField diff = steklov_apply(in.phi, eps) - in.phi;
        switch (kind) {
        case LemmaKind::M2:
            r.lhs = l2_norm(diff);
            r.rhs_part = eps * grad_norm(in.phi);
            break;
        case LemmaKind::M3:
            r.lhs = hminus1_norm(diff);
            r.rhs_part = eps * l2_norm(in.phi);
            break;
        default:
            r.lhs = l2_norm(diff);
            r.rhs_part = eps * eps * hessian_norm(in.phi);
            break;
        }
        return r;
    }

    const int m = eps_denominator(eps);
    const int d = in.phi.dim();
    const int fac_band = std::max(field_band(in.b),
                                  in.beta.dim() ? field_band(in.beta) : 0);
    const int fld_band = std::max(field_band(in.phi),
                                  in.psi.dim() ? field_band(in.psi) : 0);
    int nw = 2 * (m * fac_band + 2 * fld_band) + 4;
    if (nw % 2) ++nw;

    TorusField phi = resample(in.phi, nw);
    TorusField sphi = steklov_apply(phi, eps);
    TorusField b_eps = rescale_oscillatory(in.b, m, nw);
    const double b2 = mean_product(in.b, in.b);

    switch (kind) {
    case LemmaKind::L41: {
        TorusField bs = multiply(b_eps, sphi, nw);
        r.lhs = l2_norm(bs) * l2_norm(bs);
        r.rhs_part = b2 * l2_norm(phi) * l2_norm(phi);
        break;
    }
    case LemmaKind::L42: {
        if (std::abs(mean(in.b)) > 1e-12)
            throw std::invalid_argument("periodic factor must have zero mean");
        TorusField bs = multiply(b_eps, sphi, nw);
        TorusField Phi = resample(in.psi, nw);
        r.lhs = std::abs(l2_inner(bs, Phi));
        r.rhs_part = eps * std::sqrt(b2) * l2_norm(phi) * grad_norm(Phi);
        break;
    }
    case LemmaKind::L44: {
        if (std::abs(mean(in.b)) > 1e-12)
            throw std::invalid_argument("periodic factor must have zero mean");
        TorusField bs = multiply(b_eps, sphi, nw);
        TorusField psi = resample(in.psi, nw);
        r.lhs = std::abs(l2_inner(bs, steklov_apply(psi, eps)));
        r.rhs_part = eps * eps * std::sqrt(b2) * grad_norm(phi) * grad_norm(psi);
        break;
    }
    case LemmaKind::L45:
    case LemmaKind::L46: {
        TorusField psi = resample(in.psi, nw);
        TorusField beta_eps = rescale_oscillatory(in.beta, m, nw);
        TorusField as = multiply(b_eps, sphi, nw);
        TorusField bs = multiply(beta_eps, steklov_apply(psi, eps), nw);
        const double form = l2_inner(as, bs);
        const double ab = mean_product(in.b, in.beta);
        const double a2 = b2;
        const double bb2 = mean_product(in.beta, in.beta);
        if (kind == LemmaKind::L45) {
            if (std::abs(ab) > 1e-12)
                throw std::invalid_argument("factors must satisfy <alpha beta> = 0");
            r.lhs = std::abs(form);
            r.rhs_part = eps * eps * std::sqrt(a2 * bb2) * grad_norm(phi) * grad_norm(psi);
        } else {
            r.lhs = std::abs(form - ab * l2_inner(phi, psi));
            r.rhs_part = eps * std::sqrt(a2 * bb2) * l2_norm(phi) * grad_norm(psi);
        }
        break;
    }
    default:
        (void)d;
        throw std::logic_error("unhandled estimate kind");
    }
    return r;
}

} // namespace perihom
