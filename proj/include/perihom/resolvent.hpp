#ifndef PERIHOM_RESOLVENT_HPP
#define PERIHOM_RESOLVENT_HPP

#include "perihom/cell.hpp"
#include "perihom/coefficient.hpp"
#include "perihom/linalg.hpp"
#include "perihom/torus_field.hpp"

namespace perihom {

struct SolveStats {
    int iterations = 0;
    double rel_residual = 0.0;
    double f_l2 = 0.0;
    double u_l2 = 0.0;
    double grad_u_l2 = 0.0;
};

// Oscillatory resolvent (-div a(x/eps) grad + 1) u = f on the torus, solved
// matrix-free on an n-per-axis grid.  Requires 1/eps integer and
// n > 2 * (1/eps) * band(a).  adjoint=true solves with a^T.
TorusField solve_resolvent(const CoefficientField& a, double eps, const TorusField& f,
                           int n, double tol, bool adjoint, SolveStats* stats = nullptr);

// Constant-coefficient resolvent (-div a0 grad + 1)^-1 f, exact in Fourier
// space; the skew part of a0 drops out of the symbol.
TorusField solve_homogenized(const Mat& a0, const TorusField& f, bool adjoint = false);

// u_smooth + eps * N(x/eps) . grad u_smooth, with u_smooth = S^eps u0 when
// smoothing is on.  grad holds the product-rule gradient
// (grad N^j)_eps d_j u_smooth + e_j d_j u_smooth + eps N_eps^j grad d_j u_smooth.
struct FirstOrderApprox {
    TorusField value;
    TorusField grad; // rank-d
};
FirstOrderApprox first_order_approx(const TorusField& u0, const CellCorrectors& correctors,
                                    double eps, bool smoothing, int n);

enum class LSign {
    Paper2121, // third-order coefficient (ctilde - c)
    Paper3250, // third-order coefficient (c - ctilde)
};

struct SecondOrderOptions {
    bool smoothing = true;
    LSign sign = LSign::Paper3250;
    bool include_adjoint_term = true; // eps (Ktilde_eps)^* f
    bool include_third_order = true;  // eps L f
};

// u + eps K_eps f + eps (Ktilde_eps)^* f + eps L f on grid n, where
//   K_eps f          = N_eps . S^eps grad (A0+1)^-1 f,
//   (Ktilde_eps)^* f = -(A0+1)^-1 S^eps div(Ntilde_eps f),
//   L f              = (A0+1)^-1 dc_i^{jk} d_j d_i d_k (A0+1)^-1 f,
// with dc fixed by the sign option.  Smoothing off replaces S^eps by identity.
TorusField second_order_approx(const TorusField& f, const CellSolution& cell,
                               double eps, const SecondOrderOptions& opt, int n);

// The eps L f term alone (diagnostic; vanishes for symmetric coefficients).
TorusField third_order_term(const TorusField& f, const CellSolution& cell,
                            double eps, LSign sign, int n);

} // namespace perihom

#endif
