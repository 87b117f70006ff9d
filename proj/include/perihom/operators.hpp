#ifndef PERIHOM_OPERATORS_HPP
#define PERIHOM_OPERATORS_HPP

#include <vector>

#include "perihom/coefficient.hpp"
#include "perihom/krylov.hpp"
#include "perihom/linalg.hpp"
#include "perihom/torus_field.hpp"

namespace perihom {

// Matrix-free Fourier-Galerkin form of  v -> -div( a(m x) grad v ) + shift v
// on an n-per-axis grid.  Coefficient-gradient products are formed pointwise
// on the 3/2-rule padded grid, so retained modes carry no aliasing error.
class SpectralOperator {
public:
    SpectralOperator(const CoefficientField& a, int n, int m, double shift);

    int dim() const { return d_; }
    int n() const { return n_; }
    int padded() const { return M_; }

    void apply(const cvec& in, cvec& out) const;

    // a(m x)(e_j + grad v) truncated to the n-grid; the zero mode is the
    // exact cell average of the flux.
    TorusField flux(const TorusField& v, int j) const;

    // project_zero: treat the zero mode as identity (cell problem is solved
    // on mean-zero fields, where the operator is definite).
    ApplyFn apply_fn(bool project_zero) const;
    // Constant-coefficient inverse (-div S grad + shift)^-1, diagonal in
    // Fourier space; S should be the symmetric mean <a^s>.
    ApplyFn precond_fn(const Mat& S) const;

private:
    int d_, n_, M_, m_;
    double shift_;
    std::size_t npts_n_, npts_M_;
    std::vector<std::vector<double>> aphys_;   // d*d entries on M^d
    std::vector<std::size_t> map_;             // n-grid idx -> M-grid idx
    std::vector<double> kfac_;                 // 2*pi*k_j per idx (0 at Nyquist), d-major
};

} // namespace perihom

#endif
