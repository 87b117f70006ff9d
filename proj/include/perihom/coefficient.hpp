#ifndef PERIHOM_COEFFICIENT_HPP
#define PERIHOM_COEFFICIENT_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "perihom/linalg.hpp"
#include "perihom/torus_field.hpp"

namespace perihom {

struct FourierMode {
    std::vector<int> k;
    cplx amp;
};

// 1-periodic d x d real matrix field a(y), stored as a finite list of Fourier
// modes per entry.  The canonical spec is band-limited; grid samples are
// accepted and converted by DFT.  Real-valuedness (conjugate symmetry across
// k <-> -k) is validated on construction.
class CoefficientField {
public:
    explicit CoefficientField(int dim);
    static CoefficientField identity(int dim);
    static CoefficientField constant(const Mat& m);

    int dim() const { return dim_; }

    // Accumulate amplitude on mode k of entry (i,j).  The caller must keep
    // the overall entry conjugate-symmetric; validate() checks it.
    void add_mode(int i, int j, std::vector<int> k, cplx amp);
    // Adds amp/2 on k and conj on -k: a real cos/sin pair in one call.
    void add_real_mode(int i, int j, const std::vector<int>& k, cplx half_amp);

    const std::vector<FourierMode>& entry(int i, int j) const;

    int band() const;                 // max |k_j| over all stored modes
    Mat mean() const;                 // zero-frequency matrix <a>
    Mat evaluate(const std::vector<double>& y) const; // exact trig evaluation at y mod 1

    std::pair<CoefficientField, CoefficientField> split_symmetric() const;
    CoefficientField transpose() const;
    bool is_symmetric(double tol = 1e-13) const;

    // min/max eigenvalue of a^s(y) over grid_resolution^dim sample points.
    // Throws NonElliptic if the lower bound is <= 0.
    std::pair<double, double> ellipticity_constant(int grid_resolution) const;

    // Entry (i,j) as a spectral field on grid n (throws GridTooCoarse if the
    // band does not fit strictly under the Nyquist limit).
    TorusField entry_field(int i, int j, int n) const;

    // Exact physical samples of all entries of a(m x) on an M^dim grid
    // (entry-major, row-major within).  Throws GridTooCoarse if m*band does
    // not fit on the grid.
    std::vector<std::vector<double>> sample_scaled(int M, int m) const;

    // Validates conjugate symmetry of every entry; throws ParseError.
    void validate() const;

    static CoefficientField from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static CoefficientField load(const std::string& path);

private:
    int dim_;
    std::vector<std::vector<FourierMode>> entries_; // dim*dim, row-major
    std::vector<FourierMode>& entry_mut(int i, int j);
};

// Dyadic BMO lower bound of a scalar periodic function given its samples on a
// 2^max_depth-per-axis grid: max over cube depths 0..max_depth and all
// grid translates (periodic wrap) of the mean oscillation (1/|B|) int_B |g - g_B|.
double bmo_seminorm(const std::vector<double>& samples, int dim, int max_depth);
double bmo_seminorm(const TorusField& g, int max_depth);

} // namespace perihom

#endif
