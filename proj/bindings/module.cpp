// Python bindings for the main operations: homogenization, smoothing,
// resolvent solves, sweeps, and the rate/oscillation utilities.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "perihom/cell.hpp"
#include "perihom/coefficient.hpp"
#include "perihom/resolvent.hpp"
#include "perihom/steklov.hpp"
#include "perihom/sweep.hpp"

namespace py = pybind11;
using namespace perihom;

namespace {

CoefficientField coeff_from_json_str(const std::string& text) {
    return CoefficientField::from_json(nlohmann::json::parse(text));
}

// real grid samples (n^dim row-major, scalar) <-> spectral field
TorusField field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    const int dim = static_cast<int>(arr.ndim());
    const int n = static_cast<int>(arr.shape(0));
    for (int i = 1; i < dim; ++i)
        if (static_cast<int>(arr.shape(i)) != n)
            throw py::value_error("field array must be square (n per axis)");
    std::vector<double> vals(arr.data(), arr.data() + arr.size());
    return from_physical(dim, n, 1, vals);
}

py::array_t<double> field_to_array(const TorusField& f) {
    std::vector<double> vals = to_physical(f);
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.dim()), f.n());
    py::array_t<double> out(shape);
    std::copy(vals.begin(), vals.end(), out.mutable_data());
    return out;
}

py::dict cell_to_dict(const CellSolution& sol) {
    py::dict d;
    const int dim = sol.hom.a0.dim();
    py::list a0, a0_adj;
    for (int i = 0; i < dim; ++i) {
        py::list ri, rj;
        for (int j = 0; j < dim; ++j) {
            ri.append(sol.hom.a0(i, j));
            rj.append(sol.hom.a0_adj(i, j));
        }
        a0.append(ri);
        a0_adj.append(rj);
    }
    d["a0"] = a0;
    d["a0_adjoint"] = a0_adj;
    d["lambda_low"] = sol.lambda_low;
    d["lambda_high"] = sol.lambda_high;
    d["c"] = sol.hom.constants.c;
    d["c_tilde"] = sol.hom.constants.ctilde;
    d["route_disagreement"] = sol.hom.constants.route_disagreement;
    d["corrector_sup_norms"] = sol.primal.sup_norms;
    d["flux_defects"] = sol.hom.g.defects;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "periodic homogenization toolkit (native core)";

    m.def("homogenize",
          [](const std::string& coeff_json, int n_cell, double tol) {
              return cell_to_dict(homogenize(coeff_from_json_str(coeff_json), n_cell, tol));
          },
          py::arg("coeff_json"), py::arg("n_cell") = 64, py::arg("tol") = 1e-10,
          "Solve the cell problems for a coefficient given as JSON text; returns the "
          "effective matrix, ellipticity bounds, and corrector statistics.");

    m.def("steklov_apply",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, double eps) {
              return field_to_array(steklov_apply(field_from_array(arr), eps));
          },
          py::arg("field"), py::arg("eps"),
          "Cube-average a real periodic field sampled on a uniform grid.");

    m.def("bmo_seminorm",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, int max_depth) {
              const int dim = static_cast<int>(arr.ndim());
              std::vector<double> vals(arr.data(), arr.data() + arr.size());
              return bmo_seminorm(vals, dim, max_depth);
          },
          py::arg("samples"), py::arg("max_depth"),
          "Dyadic mean-oscillation estimate of a periodic function from grid samples "
          "(2^max_depth points per axis).");

    m.def("fit_rate", &fit_rate, py::arg("points"),
          "Least-squares slope of log(error) against log(eps) from (eps, error) pairs.");

    m.def("solve_resolvent",
          [](const std::string& coeff_json, double eps,
             py::array_t<double, py::array::c_style | py::array::forcecast> f, int n, double tol,
             bool adjoint) {
              SolveStats st;
              TorusField u = solve_resolvent(coeff_from_json_str(coeff_json), eps,
                                             field_from_array(f), n, tol, adjoint, &st);
              py::dict stats;
              stats["iterations"] = st.iterations;
              stats["rel_residual"] = st.rel_residual;
              stats["f_l2"] = st.f_l2;
              stats["u_l2"] = st.u_l2;
              stats["grad_u_l2"] = st.grad_u_l2;
              return py::make_tuple(field_to_array(u), stats);
          },
          py::arg("coeff_json"), py::arg("eps"), py::arg("f"), py::arg("n"),
          py::arg("tol") = 1e-10, py::arg("adjoint") = false,
          "Solve the oscillatory resolvent problem; returns (solution samples, stats).");

    m.def("solve_homogenized",
          [](const std::vector<std::vector<double>>& a0,
             py::array_t<double, py::array::c_style | py::array::forcecast> f) {
              const int d = static_cast<int>(a0.size());
              Mat m0(d);
              for (int i = 0; i < d; ++i)
                  for (int j = 0; j < d; ++j) m0(i, j) = a0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
              return field_to_array(solve_homogenized(m0, field_from_array(f)));
          },
          py::arg("a0"), py::arg("f"),
          "Exact constant-coefficient resolvent solve in Fourier space.");

    m.def("run_sweep",
          [](const std::string& config_json, int jobs) {
              SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(config_json));
              return structured_report(run_sweep(cfg, jobs)).dump();
          },
          py::arg("config_json"), py::arg("jobs") = 0,
          "Run a convergence sweep from a JSON config; returns the structured report as JSON text.");
}
