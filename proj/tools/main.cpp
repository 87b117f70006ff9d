// Command-line front end: cell problems, smoothing-lemma battery, single
// resolvent solves, and convergence sweeps.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "perihom/cell.hpp"
#include "perihom/coefficient.hpp"
#include "perihom/errors.hpp"
#include "perihom/resolvent.hpp"
#include "perihom/steklov.hpp"
#include "perihom/sweep.hpp"

using namespace perihom;

namespace {

LSign parse_sign(const std::string& s) {
    if (s == "paper-2121") return LSign::Paper2121;
    if (s == "paper-3250") return LSign::Paper3250;
    throw CLI::ValidationError("--sign", "must be paper-2121 or paper-3250");
}

void print_matrix(const char* label, const Mat& m) {
    std::printf("%s\n", label);
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) std::printf("  % .12e", m(i, j));
        std::printf("\n");
    }
}

int run_cell(const std::string& coeff_path, int n_cell, double tol,
             const std::string& cache_path) {
    CoefficientField a = CoefficientField::load(coeff_path);
    CellSolution sol;
    const std::string hash = cell_content_hash(a, n_cell, tol);
    bool from_cache = false;
    if (!cache_path.empty() && cell_cache_load(cache_path, hash, sol)) {
        from_cache = true;
    } else {
        sol = homogenize(a, n_cell, tol);
        if (!cache_path.empty()) cell_cache_save(cache_path, hash, sol);
    }
    std::printf("dim %d, n_cell %d, tol %.1e%s\n", a.dim(), n_cell, tol,
                from_cache ? " (cache hit)" : "");
    std::printf("ellipticity bounds: lambda in [%.6f, %.6f]\n", sol.lambda_low, sol.lambda_high);
    print_matrix("homogenized matrix a0:", sol.hom.a0);
    print_matrix("adjoint-family matrix (should be a0^T):", sol.hom.a0_adj);
    const int d = a.dim();
    for (int j = 0; j < d; ++j)
        std::printf("corrector N^%d: sup %.6e, residual %.2e, iters %d, flux defect %.2e\n",
                    j + 1, sol.primal.sup_norms[static_cast<std::size_t>(j)],
                    sol.primal.residual_norms[static_cast<std::size_t>(j)],
                    sol.primal.iterations[static_cast<std::size_t>(j)],
                    sol.hom.g.defects[static_cast<std::size_t>(j)]);
    for (int j = 0; j < d; ++j)
        std::printf("adjoint corrector N~^%d: sup %.6e, residual %.2e, flux defect %.2e\n",
                    j + 1, sol.adjoint.sup_norms[static_cast<std::size_t>(j)],
                    sol.adjoint.residual_norms[static_cast<std::size_t>(j)],
                    sol.hom.gtilde.defects[static_cast<std::size_t>(j)]);
    std::printf("corrector constants (j k i: c, c~):\n");
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                std::printf("  %d %d %d  % .12e  % .12e\n", j + 1, k + 1, i + 1,
                            sol.hom.constants.at(false, j, k, i),
                            sol.hom.constants.at(true, j, k, i));
    std::printf("route disagreement: %.2e\n", sol.hom.constants.route_disagreement);
    return 0;
}

int run_lemmas(std::uint64_t seed, int trials, std::ostream& out) {
    out << "kind, eps, lhs, rhs_part, ratio\n";
    struct Case { LemmaKind kind; const char* name; bool needs_b, needs_beta, zero_mean_b; };
    const std::vector<Case> cases = {
        {LemmaKind::M2, "m2", false, false, false},
        {LemmaKind::M3, "m3", false, false, false},
        {LemmaKind::M7, "m7", false, false, false},
        {LemmaKind::L41, "m4", true, false, true},
        {LemmaKind::L42, "m5", true, false, true},
        {LemmaKind::L44, "m8", true, false, true},
        {LemmaKind::L45, "m13", true, true, false},
        {LemmaKind::L46, "m14", true, true, false},
    };
    for (const auto& c : cases) {
        for (int t = 0; t < trials; ++t) {
            LemmaInputs in;
            in.phi = TorusField::random_real(2, 32, 7, 1, seed + 11 * static_cast<std::uint64_t>(t), false);
            in.psi = TorusField::random_real(2, 32, 7, 1, seed + 11 * static_cast<std::uint64_t>(t) + 1, false);
            if (c.needs_b)
                in.b = TorusField::random_real(2, 8, 2, 1, seed + 11 * static_cast<std::uint64_t>(t) + 2,
                                               c.zero_mean_b);
            if (c.needs_beta) {
                in.beta = TorusField::random_real(2, 8, 2, 1, seed + 11 * static_cast<std::uint64_t>(t) + 3, false);
                if (c.kind == LemmaKind::L45) {
                    const double ab = mean(multiply(in.b, in.beta, 8));
                    const double a2 = mean(multiply(in.b, in.b, 8));
                    in.beta -= (ab / a2) * in.b;
                }
            }
            for (double eps : {1.0 / 4, 1.0 / 8, 1.0 / 16}) {
                LemmaResult r = lemma_evaluator(c.kind, in, eps);
                const double ratio = r.rhs_part > 0.0 ? r.lhs / r.rhs_part : 0.0;
                char line[160];
                std::snprintf(line, sizeof line, "%s, %.6f, %.12e, %.12e, %.6e\n",
                              c.name, eps, r.lhs, r.rhs_part, ratio);
                out << line;
            }
        }
    }
    return 0;
}

int run_solve(const std::string& coeff_path, int m, int grid, int order, bool no_smoothing,
              LSign sign, double tol, const std::string& out_path, std::uint64_t seed) {
    CoefficientField a = CoefficientField::load(coeff_path);
    const double eps = 1.0 / m;
    TorusField f = TorusField::random_real(a.dim(), 8, 2, 1, seed, false);
    {
        const double nrm = l2_norm(f);
        f *= 1.0 / nrm;
    }
    if (grid <= 0) grid = 8 * m * std::max(1, a.band());

    SolveStats stats;
    TorusField u_eps = solve_resolvent(a, eps, f, grid, tol, false, &stats);
    std::printf("oscillatory solve: grid %d, %d iterations, residual %.2e\n", grid,
                stats.iterations, stats.rel_residual);
    std::printf("energy check: |u|=%.6e <= |f|=%.6e\n", stats.u_l2, stats.f_l2);

    TorusField approx;
    if (order == 0) {
        CellSolution cell = homogenize(a, 64, tol);
        approx = resample(solve_homogenized(cell.hom.a0, f), grid);
    } else if (order == 1) {
        CellSolution cell = homogenize(a, 64, tol);
        TorusField u0 = solve_homogenized(cell.hom.a0, f);
        approx = first_order_approx(u0, cell.primal, eps, !no_smoothing, grid).value;
    } else {
        CellSolution cell = homogenize(a, 64, tol);
        SecondOrderOptions opt;
        opt.smoothing = !no_smoothing;
        opt.sign = sign;
        approx = second_order_approx(f, cell, eps, opt, grid);
    }
    std::printf("order-%d approximation error: L2 %.6e\n", order,
                l2_norm(u_eps - resample(approx, grid)));

    nlohmann::json j;
    j["field"] = torus_field_to_json(u_eps);
    j["approximation"] = torus_field_to_json(approx);
    j["order"] = order;
    j["eps"] = eps;
    std::ofstream os(out_path);
    if (!os) throw ParseError("cannot open output file " + out_path);
    os << j.dump(2) << "\n";
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& sign_str,
                  bool no_smoothing, int jobs, const std::string& out_dir) {
    SweepConfig cfg = SweepConfig::load(config_path);
    if (!sign_str.empty()) cfg.sign = parse_sign(sign_str);
    if (no_smoothing) cfg.smoothing = false;
    cfg.validate();
    ConvergenceReport rep = run_sweep(cfg, jobs);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(out_dir + "/sweep.csv");
        emit_csv(rep, csv);
    }
    {
        std::ofstream js(out_dir + "/report.json");
        js << structured_report(rep).dump(2) << "\n";
    }

    const bool pass = rep.slopes_defined && !rep.partial &&
                      rep.s0 >= 0.9 && rep.s1 >= 0.9 && rep.s2 >= 1.8;
    if (rep.slopes_defined)
        std::printf("slopes: s0=%.3f s1=%.3f s2=%.3f -> %s\n", rep.s0, rep.s1, rep.s2,
                    pass ? "PASS" : "FAIL");
    else
        std::printf("slopes undefined (errors at solver noise level or partial sweep)\n");
    if (!pass) {
        nlohmann::json fail;
        fail["passed"] = false;
        fail["partial"] = rep.partial;
        fail["slopes_defined"] = rep.slopes_defined;
        if (rep.slopes_defined) {
            fail["s0"] = rep.s0;
            fail["s1"] = rep.s1;
            fail["s2"] = rep.s2;
        }
        std::ofstream fs(out_dir + "/failure.json");
        fs << fail.dump(2) << "\n";
        std::cout << fail.dump() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic homogenization toolkit: cell problems, smoothing estimates, "
                 "resolvent approximations, convergence sweeps"};
    app.require_subcommand(1);

    // cell
    auto* cell = app.add_subcommand("cell", "solve the cell problems and print the effective data");
    std::string cell_coeff, cell_cache;
    int cell_n = 64;
    double cell_tol = 1e-10;
    cell->add_option("--coeff", cell_coeff, "coefficient JSON file")->required();
    cell->add_option("--n-cell", cell_n, "cell grid per axis (default 64)");
    cell->add_option("--tol", cell_tol, "solver tolerance (default 1e-10)");
    cell->add_option("--cache", cell_cache, "corrector cache file (content-hash keyed)");

    // lemmas
    auto* lemmas = app.add_subcommand("lemmas", "run the smoothing-estimate battery; CSV to stdout or --out");
    std::uint64_t lem_seed = 2024;
    int lem_trials = 5;
    std::string lem_out;
    lemmas->add_option("--seed", lem_seed, "base seed for the random fields");
    lemmas->add_option("--trials", lem_trials, "trials per estimate (default 5)");
    lemmas->add_option("--out", lem_out, "CSV output file (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "one oscillatory solve plus an approximation of chosen order");
    std::string sol_coeff, sol_out = "solution.json", sol_sign = "paper-3250";
    int sol_m = 8, sol_grid = 0, sol_order = 2;
    bool sol_nosmooth = false;
    double sol_tol = 1e-10;
    std::uint64_t sol_seed = 1234;
    solve->add_option("--coeff", sol_coeff, "coefficient JSON file")->required();
    solve->add_option("--eps", sol_m, "scale denominator m (eps = 1/m)")->required();
    solve->add_option("--grid", sol_grid, "solve grid per axis (default 8*m*band)");
    solve->add_option("--order", sol_order, "approximation order 0, 1, or 2")
        ->check(CLI::Range(0, 2));
    solve->add_flag("--no-smoothing", sol_nosmooth, "disable the cube-averaging regularization");
    solve->add_option("--sign", sol_sign, "third-order constant sign: paper-2121 or paper-3250");
    solve->add_option("--tol", sol_tol, "solver tolerance");
    solve->add_option("--seed", sol_seed, "seed for the right-hand side datum");
    solve->add_option("--out", sol_out, "output field file (JSON with dim/grid header)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "convergence sweep from a config file");
    std::string sw_config, sw_sign, sw_out = "sweep-out";
    bool sw_nosmooth = false;
    int sw_jobs = 0;
    sweep->add_option("--config", sw_config, "sweep config JSON")->required();
    sweep->add_option("--sign", sw_sign, "override the third-order constant sign");
    sweep->add_flag("--no-smoothing", sw_nosmooth, "disable the cube-averaging regularization");
    sweep->add_option("--jobs", sw_jobs, "worker threads (0 = auto; PERIHOM_JOBS also honored)");
    sweep->add_option("--out", sw_out, "output directory for sweep.csv and report.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cell) return run_cell(cell_coeff, cell_n, cell_tol, cell_cache);
        if (*lemmas) {
            if (lem_out.empty()) return run_lemmas(lem_seed, lem_trials, std::cout);
            std::ofstream os(lem_out);
            if (!os) throw ParseError("cannot open output file " + lem_out);
            return run_lemmas(lem_seed, lem_trials, os);
        }
        if (*solve)
            return run_solve(sol_coeff, sol_m, sol_grid, sol_order, sol_nosmooth,
                             parse_sign(sol_sign), sol_tol, sol_out, sol_seed);
        if (*sweep) return run_sweep_cmd(sw_config, sw_sign, sw_nosmooth, sw_jobs, sw_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
