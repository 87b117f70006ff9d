#ifndef PERIHOM_KRYLOV_HPP
#define PERIHOM_KRYLOV_HPP

#include <complex>
#include <functional>
#include <vector>

namespace perihom {

using cvec = std::vector<std::complex<double>>;
using ApplyFn = std::function<void(const cvec&, cvec&)>;

struct KrylovResult {
    int iterations = 0;
    double rel_residual = 0.0; // preconditioned residual, relative to |b|_P
    bool converged = false;
};

// Preconditioned conjugate gradients; A and P must be SPD w.r.t. Re<x,y>.
KrylovResult pcg(const ApplyFn& A, const ApplyFn& P, const cvec& b, cvec& x,
                 double tol, int max_iter);

// BiCGStab with SPD preconditioner P (applied as P r); stopping criterion is
// the same P-weighted residual norm as in pcg.
KrylovResult bicgstab(const ApplyFn& A, const ApplyFn& P, const cvec& b, cvec& x,
                      double tol, int max_iter);

} // namespace perihom

#endif
