#include "perihom/cell.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "perihom/errors.hpp"
#include "perihom/fft.hpp"
#include "perihom/krylov.hpp"
#include "perihom/operators.hpp"

namespace perihom {

namespace {

constexpr int CELL_ITER_CAP = 10000;

// -div(a e_j) as the right-hand side: b(k) = i sum_i 2*pi*k_i ahat_ij(k),
// restricted to the n-grid (strictly sub-Nyquist modes).
TorusField cell_rhs(const CoefficientField& a, int n, int j) {
    TorusField rhs(a.dim(), n, 1);
    for (int i = 0; i < a.dim(); ++i) {
        TorusField aij = a.entry_field(i, j, n);
        rhs += derivative(aij, i);
    }
    return rhs;
}

} // namespace

CellCorrectors solve_cell_problem(const CoefficientField& a, int n_cell, double tol,
                                  bool adjoint) {
    a.ellipticity_constant(std::max(64, 4 * std::max(1, a.band())));
    const CoefficientField field = adjoint ? a.transpose() : a;
    const int d = field.dim();

    CellCorrectors cc;
    cc.dim = d;
    cc.n_cell = n_cell;
    cc.adjoint = adjoint;

    SpectralOperator op(field, n_cell, 1, 0.0);
    const ApplyFn A = op.apply_fn(/*project_zero=*/true);
    const ApplyFn P = op.precond_fn(field.mean().sym());
    const bool symmetric = field.is_symmetric();

    for (int j = 0; j < d; ++j) {
        TorusField rhs = cell_rhs(field, n_cell, j);
        cvec b(rhs.comp(0), rhs.comp(0) + rhs.npoints());
        b[0] = cplx(0.0, 0.0); // mean-zero subspace
        cvec x(b.size(), cplx(0.0, 0.0));
        KrylovResult kr = symmetric ? pcg(A, P, b, x, tol, CELL_ITER_CAP)
                                    : bicgstab(A, P, b, x, tol, CELL_ITER_CAP);
        if (!kr.converged) throw NoConvergence(kr.iterations, kr.rel_residual);

        TorusField N(d, n_cell, 1);
        std::copy(x.begin(), x.end(), N.comp(0));
        N.comp(0)[0] = cplx(0.0, 0.0); // pin <N> = 0 exactly
        cc.N.push_back(N);
        cc.gradN.push_back(gradient(N));
        cc.residual_norms.push_back(kr.rel_residual);
        cc.iterations.push_back(kr.iterations);
        cc.sup_norms.push_back(sup_norm(N));
    }
    return cc;
}

Mat homogenized_matrix(const CoefficientField& a, const CellCorrectors& correctors) {
    const CoefficientField field = correctors.adjoint ? a.transpose() : a;
    const int d = field.dim();
    SpectralOperator op(field, correctors.n_cell, 1, 0.0);
    Mat a0(d);
    for (int j = 0; j < d; ++j) {
        TorusField q = op.flux(correctors.N[static_cast<std::size_t>(j)], j);
        for (int i = 0; i < d; ++i) a0(i, j) = std::real(q.comp(i)[0]);
    }
    return a0;
}

FluxCorrectors flux_correctors(const CoefficientField& a, const CellCorrectors& correctors,
                               const Mat& a0) {
    const CoefficientField field = correctors.adjoint ? a.transpose() : a;
    const int d = field.dim();
    const int n = correctors.n_cell;
    SpectralOperator op(field, n, 1, 0.0);
    FluxCorrectors fc;
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        TorusField g = op.flux(correctors.N[static_cast<std::size_t>(j)], j);
        for (int i = 0; i < d; ++i) g.comp(i)[0] -= a0(i, j); // exact zero mean
        double defect = 0.0;
        for (std::size_t idx = 0; idx < g.npoints(); ++idx) {
            g.wavevector(idx, k.data());
            cplx dot(0.0, 0.0);
            for (int i = 0; i < d; ++i) dot += static_cast<double>(k[static_cast<std::size_t>(i)]) * g.comp(i)[idx];
            defect = std::max(defect, std::abs(dot));
        }
        fc.g.push_back(g);
        fc.defects.push_back(defect);
    }
    return fc;
}

CorrectorConstants corrector_constants(const CoefficientField& a,
                                       const CellCorrectors& primal,
                                       const CellCorrectors& adjoint,
                                       const FluxCorrectors& g,
                                       const FluxCorrectors& gtilde,
                                       double tol) {
    const int d = primal.dim;
    const int n = primal.n_cell;
    CorrectorConstants out;
    out.dim = d;
    const std::size_t sz = static_cast<std::size_t>(d) * d * d;
    out.c.assign(sz, 0.0);
    out.ctilde.assign(sz, 0.0);
    std::vector<double> c2(sz, 0.0), ct2(sz, 0.0);

    // Route 1: cell averages against the (mean-free) flux correctors,
    // evaluated by dealiased spectral products.
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            TorusField pc = multiply(primal.N[static_cast<std::size_t>(k)],
                                     gtilde.g[static_cast<std::size_t>(j)], n);
            TorusField pct = multiply(adjoint.N[static_cast<std::size_t>(k)],
                                      g.g[static_cast<std::size_t>(j)], n);
            for (int i = 0; i < d; ++i) {
                out.c[(static_cast<std::size_t>(j) * d + k) * d + i] = mean(pc, i);
                out.ctilde[(static_cast<std::size_t>(j) * d + k) * d + i] = mean(pct, i);
            }
        }
    }

    // Route 2: physical-grid quadrature of <N^k . raw flux>, where the raw
    // flux a*(grad Ntilde^j + e_j) differs from gtilde^j by a constant that a
    // zero-mean N^k cannot see.  Exact for the 2n grid (product band < n).
    const int n2 = 2 * n;
    SpectralOperator op_p(a, n, 1, 0.0);
    SpectralOperator op_a(a.transpose(), n, 1, 0.0);
    auto quad = [&](const TorusField& Nk, const TorusField& q, int i) {
        std::vector<double> np = to_physical(resample(Nk, n2));
        std::vector<double> qp = to_physical(resample(q, n2));
        const std::size_t pts = np.size();
        double s = 0.0;
        const double* qi = qp.data() + static_cast<std::size_t>(i) * pts;
        for (std::size_t p = 0; p < pts; ++p) s += np[p] * qi[p];
        return s / static_cast<double>(pts);
    };
    for (int j = 0; j < d; ++j) {
        TorusField qt = op_a.flux(adjoint.N[static_cast<std::size_t>(j)], j);
        TorusField qp = op_p.flux(primal.N[static_cast<std::size_t>(j)], j);
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                c2[(static_cast<std::size_t>(j) * d + k) * d + i] =
                    quad(primal.N[static_cast<std::size_t>(k)], qt, i);
                ct2[(static_cast<std::size_t>(j) * d + k) * d + i] =
                    quad(adjoint.N[static_cast<std::size_t>(k)], qp, i);
            }
        }
    }

    double dis = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        dis = std::max(dis, std::abs(out.c[i] - c2[i]));
        dis = std::max(dis, std::abs(out.ctilde[i] - ct2[i]));
    }
    out.route_disagreement = dis;
    if (dis > 100.0 * tol) {
        std::ostringstream msg;
        msg << "corrector-constant evaluation routes disagree by " << dis
            << " (allowed " << 100.0 * tol << ")";
        throw InternalInconsistency(msg.str());
    }
    return out;
}

CellSolution homogenize(const CoefficientField& a, int n_cell, double tol) {
    CellSolution sol;
    sol.n_cell = n_cell;
    sol.tol = tol;
    auto lam = a.ellipticity_constant(std::max(64, 4 * std::max(1, a.band())));
    sol.lambda_low = lam.first;
    sol.lambda_high = lam.second;
    sol.primal = solve_cell_problem(a, n_cell, tol, false);
    sol.adjoint = solve_cell_problem(a, n_cell, tol, true);
    sol.hom.a0 = homogenized_matrix(a, sol.primal);
    sol.hom.a0_adj = homogenized_matrix(a, sol.adjoint);
    sol.hom.g = flux_correctors(a, sol.primal, sol.hom.a0);
    sol.hom.gtilde = flux_correctors(a, sol.adjoint, sol.hom.a0_adj);
    sol.hom.constants = corrector_constants(a, sol.primal, sol.adjoint,
                                            sol.hom.g, sol.hom.gtilde, tol);
    return sol;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i)
        for (int k = 0; k < m.dim(); ++k) j.push_back(m(i, k));
    return j;
}

Mat mat_from_json(const nlohmann::json& j, int d) {
    Mat m(d);
    std::size_t p = 0;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = j.at(p++).get<double>();
    return m;
}

} // namespace

nlohmann::json torus_field_to_json(const TorusField& f) {
    nlohmann::json j;
    j["dim"] = f.dim();
    j["n"] = f.n();
    j["rank"] = f.rank();
    nlohmann::json coef = nlohmann::json::array();
    for (int c = 0; c < f.rank(); ++c)
        for (std::size_t i = 0; i < f.npoints(); ++i) {
            coef.push_back(f.comp(c)[i].real());
            coef.push_back(f.comp(c)[i].imag());
        }
    j["coef"] = std::move(coef);
    return j;
}

TorusField torus_field_from_json(const nlohmann::json& j) {
    TorusField f(j.at("dim").get<int>(), j.at("n").get<int>(), j.at("rank").get<int>());
    const auto& coef = j.at("coef");
    std::size_t p = 0;
    for (int c = 0; c < f.rank(); ++c)
        for (std::size_t i = 0; i < f.npoints(); ++i) {
            const double re = coef.at(p++).get<double>();
            const double im = coef.at(p++).get<double>();
            f.comp(c)[i] = cplx(re, im);
        }
    return f;
}

std::string cell_content_hash(const CoefficientField& a, int n_cell, double tol) {
    std::ostringstream key;
    key << a.to_json().dump() << "|n=" << n_cell << "|tol=" << tol;
    std::ostringstream hex;
    hex << std::hex << fnv1a(key.str());
    return hex.str();
}

namespace {

nlohmann::json correctors_to_json(const CellCorrectors& c) {
    nlohmann::json j;
    j["dim"] = c.dim;
    j["n_cell"] = c.n_cell;
    j["adjoint"] = c.adjoint;
    j["residual_norms"] = c.residual_norms;
    j["iterations"] = c.iterations;
    j["sup_norms"] = c.sup_norms;
    j["N"] = nlohmann::json::array();
    for (const auto& f : c.N) j["N"].push_back(torus_field_to_json(f));
    return j;
}

CellCorrectors correctors_from_json(const nlohmann::json& j) {
    CellCorrectors c;
    c.dim = j.at("dim").get<int>();
    c.n_cell = j.at("n_cell").get<int>();
    c.adjoint = j.at("adjoint").get<bool>();
    c.residual_norms = j.at("residual_norms").get<std::vector<double>>();
    c.iterations = j.at("iterations").get<std::vector<int>>();
    c.sup_norms = j.at("sup_norms").get<std::vector<double>>();
    for (const auto& fj : j.at("N")) {
        c.N.push_back(torus_field_from_json(fj));
        c.gradN.push_back(gradient(c.N.back()));
    }
    return c;
}

nlohmann::json flux_to_json(const FluxCorrectors& f) {
    nlohmann::json j;
    j["defects"] = f.defects;
    j["g"] = nlohmann::json::array();
    for (const auto& g : f.g) j["g"].push_back(torus_field_to_json(g));
    return j;
}

FluxCorrectors flux_from_json(const nlohmann::json& j) {
    FluxCorrectors f;
    f.defects = j.at("defects").get<std::vector<double>>();
    for (const auto& gj : j.at("g")) f.g.push_back(torus_field_from_json(gj));
    return f;
}

} // namespace

void cell_cache_save(const std::string& path, const std::string& hash,
                     const CellSolution& sol) {
    nlohmann::json j;
    j["hash"] = hash;
    j["n_cell"] = sol.n_cell;
    j["tol"] = sol.tol;
    j["lambda_low"] = sol.lambda_low;
    j["lambda_high"] = sol.lambda_high;
    j["primal"] = correctors_to_json(sol.primal);
    j["adjoint"] = correctors_to_json(sol.adjoint);
    j["a0"] = mat_to_json(sol.hom.a0);
    j["a0_adj"] = mat_to_json(sol.hom.a0_adj);
    j["g"] = flux_to_json(sol.hom.g);
    j["gtilde"] = flux_to_json(sol.hom.gtilde);
    j["c"] = sol.hom.constants.c;
    j["ctilde"] = sol.hom.constants.ctilde;
    j["route_disagreement"] = sol.hom.constants.route_disagreement;
    std::ofstream out(path);
    out << j.dump();
}

bool cell_cache_load(const std::string& path, const std::string& expected_hash,
                     CellSolution& out) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("hash").get<std::string>() != expected_hash) return false;
        CellSolution sol;
        sol.n_cell = j.at("n_cell").get<int>();
        sol.tol = j.at("tol").get<double>();
        sol.lambda_low = j.at("lambda_low").get<double>();
        sol.lambda_high = j.at("lambda_high").get<double>();
        sol.primal = correctors_from_json(j.at("primal"));
        sol.adjoint = correctors_from_json(j.at("adjoint"));
        const int d = sol.primal.dim;
        sol.hom.a0 = mat_from_json(j.at("a0"), d);
        sol.hom.a0_adj = mat_from_json(j.at("a0_adj"), d);
        sol.hom.g = flux_from_json(j.at("g"));
        sol.hom.gtilde = flux_from_json(j.at("gtilde"));
        sol.hom.constants.dim = d;
        sol.hom.constants.c = j.at("c").get<std::vector<double>>();
        sol.hom.constants.ctilde = j.at("ctilde").get<std::vector<double>>();
        sol.hom.constants.route_disagreement = j.at("route_disagreement").get<double>();
        out = std::move(sol);
        return true;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
}

} // namespace perihom
