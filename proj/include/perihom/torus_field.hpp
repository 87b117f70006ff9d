#ifndef PERIHOM_TORUS_FIELD_HPP
#define PERIHOM_TORUS_FIELD_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "perihom/fft.hpp"

namespace perihom {

// Real scalar or vector field on the torus [0,1)^dim, stored as Fourier
// coefficients on a uniform grid with n modes per axis.  Wavenumbers are read
// in the symmetric range: grid index i maps to k = i for i <= n/2 and k = i-n
// otherwise.  Conjugate symmetry (real-valuedness) is maintained by all
// operations in this module.
class TorusField {
public:
    TorusField() : dim_(0), n_(0), rank_(0) {}
    TorusField(int dim, int n, int rank = 1);

    int dim() const { return dim_; }
    int n() const { return n_; }
    int rank() const { return rank_; }
    std::size_t npoints() const { return npts_; }

    cplx* comp(int c) { return coef_.data() + static_cast<std::size_t>(c) * npts_; }
    const cplx* comp(int c) const { return coef_.data() + static_cast<std::size_t>(c) * npts_; }

    // Access a Fourier coefficient by wavevector (wrapped into the grid).
    cplx& mode(int c, const std::vector<int>& k);
    cplx mode(int c, const std::vector<int>& k) const;

    // Wavevector of flat index idx (writes dim entries into k).
    void wavevector(std::size_t idx, int* k) const;

    TorusField& operator+=(const TorusField& o);
    TorusField& operator-=(const TorusField& o);
    TorusField& operator*=(double s);

    // Seeded band-limited real field: independent unit normal amplitudes on
    // modes with |k|_inf <= band, conjugate-symmetrized.
    static TorusField random_real(int dim, int n, int band, int rank,
                                  std::uint64_t seed, bool zero_mean = false);

private:
    int dim_, n_, rank_;
    std::size_t npts_ = 0;
    std::vector<cplx> coef_;
};

TorusField operator+(TorusField a, const TorusField& b);
TorusField operator-(TorusField a, const TorusField& b);
TorusField operator*(double s, TorusField a);

// Weighted l2 norms of the coefficient array (grid quadrature is exact for
// band-limited fields, so these agree with the physical-space Sobolev norms).
double l2_norm(const TorusField& f);
double h1_norm(const TorusField& f);      // weight 1 + |2 pi k|^2
double hminus1_norm(const TorusField& f); // weight (1 + |2 pi k|^2)^-1
double grad_norm(const TorusField& f);    // |2 pi k| weight
double hessian_norm(const TorusField& f); // |2 pi k|^2 weight
double l2_inner(const TorusField& a, const TorusField& b);

double mean(const TorusField& f, int c = 0); // zero-frequency coefficient

TorusField derivative(const TorusField& f, int axis); // componentwise d/dx_axis
TorusField gradient(const TorusField& f);             // rank 1 -> rank dim
TorusField divergence(const TorusField& v);           // rank dim -> rank 1

// Copy modes representable on the target grid; truncate or zero-pad the rest.
TorusField resample(const TorusField& f, int n_new);

// f(x) -> f(m x): mode k moves to m k; modes that leave the target band are
// dropped (the field must be adequately resolved by the caller's grid choice).
TorusField rescale_oscillatory(const TorusField& f, int m, int n_target);

// Dealiased pointwise product via zero-padded transforms (3/2-rule grid).
// Rank pairing: (1,1)->1, (r,1)->r, (1,r)->r, (r,r)->1 (dot product).
TorusField multiply(const TorusField& a, const TorusField& b, int n_out);

// Physical samples at x_i = i/n (rank * n^dim reals, component-major).
std::vector<double> to_physical(const TorusField& f);
TorusField from_physical(int dim, int n, int rank, const std::vector<double>& values);

double sup_norm(const TorusField& f); // max over grid samples of |f| (euclidean in rank)

} // namespace perihom

#endif
