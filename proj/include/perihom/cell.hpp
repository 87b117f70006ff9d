#ifndef PERIHOM_CELL_HPP
#define PERIHOM_CELL_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "perihom/coefficient.hpp"
#include "perihom/linalg.hpp"
#include "perihom/torus_field.hpp"

namespace perihom {

// One corrector family: solutions of  div a(e_j + grad N^j) = 0,  <N^j> = 0
// (the adjoint family uses a^T in place of a).
struct CellCorrectors {
    int dim = 0;
    int n_cell = 0;
    bool adjoint = false;
    std::vector<TorusField> N;      // d zero-mean scalar fields
    std::vector<TorusField> gradN;  // d rank-d fields
    std::vector<double> residual_norms;
    std::vector<int> iterations;
    std::vector<double> sup_norms;
};

struct FluxCorrectors {
    // g^j = a(grad N^j + e_j) - a0 e_j : zero mean, divergence-free.
    std::vector<TorusField> g;       // d rank-d fields
    std::vector<double> defects;     // max_k |k . ghat(k)| per j
};

// c[j][k] and ctilde[j][k] are d-vectors; flat layout (j*d + k)*d + i.
struct CorrectorConstants {
    int dim = 0;
    std::vector<double> c;
    std::vector<double> ctilde;
    double route_disagreement = 0.0; // max over components of the two formulas
    double at(bool tilde, int j, int k, int i) const {
        const auto& v = tilde ? ctilde : c;
        return v[(static_cast<std::size_t>(j) * dim + k) * dim + i];
    }
};

struct HomogenizedData {
    Mat a0;        // column j = <a(e_j + grad N^j)>
    Mat a0_adj;    // independently from the adjoint family; = a0^T to tol
    FluxCorrectors g, gtilde;
    CorrectorConstants constants;
};

// Everything the downstream approximations need, from one coefficient field.
struct CellSolution {
    int n_cell = 0;
    double tol = 0.0;
    double lambda_low = 0.0, lambda_high = 0.0;
    CellCorrectors primal, adjoint;
    HomogenizedData hom;
};

CellCorrectors solve_cell_problem(const CoefficientField& a, int n_cell, double tol,
                                  bool adjoint);

Mat homogenized_matrix(const CoefficientField& a, const CellCorrectors& correctors);

FluxCorrectors flux_correctors(const CoefficientField& a, const CellCorrectors& correctors,
                               const Mat& a0);

// Both evaluation routes: cell averages against the flux correctors, and an
// independent physical-space quadrature against the raw adjoint/primal flux.
// Throws InternalInconsistency if the routes disagree beyond 100*tol.
CorrectorConstants corrector_constants(const CoefficientField& a,
                                       const CellCorrectors& primal,
                                       const CellCorrectors& adjoint,
                                       const FluxCorrectors& g,
                                       const FluxCorrectors& gtilde,
                                       double tol);

CellSolution homogenize(const CoefficientField& a, int n_cell, double tol = 1e-10);

// Content-addressed persistence of a CellSolution (JSON container).
std::string cell_content_hash(const CoefficientField& a, int n_cell, double tol);
bool cell_cache_load(const std::string& path, const std::string& expected_hash,
                     CellSolution& out);
void cell_cache_save(const std::string& path, const std::string& hash,
                     const CellSolution& sol);

nlohmann::json torus_field_to_json(const TorusField& f);
TorusField torus_field_from_json(const nlohmann::json& j);

} // namespace perihom

#endif
