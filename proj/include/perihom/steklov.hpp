#ifndef PERIHOM_STEKLOV_HPP
#define PERIHOM_STEKLOV_HPP

#include "perihom/torus_field.hpp"

namespace perihom {

// Cube average over x - eps*[-1/2,1/2)^d, applied as the exact Fourier
// multiplier prod_j sinc(pi eps k_j).  Self-adjoint; commutes with constant-
// coefficient differential operators.  Throws BadEps for eps <= 0.
TorusField steklov_apply(const TorusField& u, double eps);

struct FieldNorms {
    double l2 = 0.0;
    double h1 = 0.0;      // weight 1 + |2 pi k|^2
    double hminus1 = 0.0; // inverse weight
};
FieldNorms norms(const TorusField& u);

// Quantitative smoothing estimates, evaluated on concrete fields.  Each case
// returns the measured left-hand side and the eps-and-norm part of the bound
// with the unspecified constant stripped, so callers test ratios (and, for
// SmoothingGradient/SmoothingDual, the explicit constant sqrt(d)/2).
enum class LemmaKind {
    L41, // ||b_eps S f||^2            vs  <b^2> ||f||^2           (constant 1)
    L42, // (b_eps S f, F), <b>=0      vs  eps <b^2>^0.5 ||f|| ||grad F||
    L44, // (b_eps S f, S g), <b>=0    vs  eps^2 <b^2>^0.5 ||grad f|| ||grad g||
    L45, // (a_eps S f, b_eps S g), <ab>=0  vs  eps^2 ...
    L46, // |(a_eps S f, b_eps S g) - <ab>(f,g)|  vs  eps ...
    M2,  // ||S f - f||                vs  eps ||grad f||     (constant sqrt(d)/2)
    M3,  // ||S f - f||_{H^-1}         vs  eps ||f||          (constant sqrt(d)/2)
    M7,  // ||S f - f||                vs  eps^2 ||grad^2 f||
};

struct LemmaInputs {
    TorusField phi;   // primary field (L^2 scale)
    TorusField psi;   // second field (Phi of L42, psi of L44/L45/L46); unused otherwise
    TorusField b;     // periodic factor on the unit cell (b or alpha); unused for M*
    TorusField beta;  // second periodic factor (L45/L46 only)
};

struct LemmaResult {
    double lhs = 0.0;
    double rhs_part = 0.0;
};

// eps must be the reciprocal of an integer so the rescaled factors stay
// band-limited on the work grid (IncommensurateEps otherwise).  Mean-zero
// preconditions of L42/L44 (<b>=0) and L45 (<alpha beta>=0) are enforced.
LemmaResult lemma_evaluator(LemmaKind kind, const LemmaInputs& in, double eps);

} // namespace perihom

#endif
