#ifndef PERIHOM_SWEEP_HPP
#define PERIHOM_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "perihom/cell.hpp"
#include "perihom/coefficient.hpp"
#include "perihom/resolvent.hpp"

namespace perihom {

struct SweepConfig {
    CoefficientField coeff;            // inline coefficient spec
    std::vector<int> eps_denominators; // strictly increasing m, eps = 1/m
    int grid_rule = 4;                 // reference grid n = rule * m * band
    int n_cell = 64;
    double tol = 1e-10;
    bool smoothing = true;
    LSign sign = LSign::Paper3250;
    bool include_adjoint_term = true;
    bool include_third_order = true;
    std::uint64_t seed = 1234;
    std::vector<FourierMode> f_modes;  // empty -> seeded 3-mode default datum
    int bmo_depth = 6;

    static SweepConfig from_json(const nlohmann::json& j);
    static SweepConfig load(const std::string& path);
    nlohmann::json to_json() const;
    void validate() const; // eps list, grid rule, datum nonemptiness

    SweepConfig() : coeff(CoefficientField::identity(2)) {}
};

// Unit-L2-norm band-limited datum used by the sweep (explicit modes from the
// config, or a seeded 3-mode trigonometric polynomial).
TorusField sweep_datum(const SweepConfig& config);

struct SweepRow {
    double eps = 0.0;
    double E0 = 0.0;          // ||u_eps - u||_L2
    double E1 = 0.0;          // ||u_eps - first order||_H1
    double E2 = 0.0;          // ||u_eps - second order||_L2
    double residual_osc = 0.0;
    double runtime_ms = 0.0;
    // solve diagnostics (not part of the CSV contract)
    double f_l2 = 0.0, u_l2 = 0.0, grad_u_l2 = 0.0;
    int grid = 0;
    bool failed = false;
    std::string error;
};

struct ConvergenceReport {
    std::vector<SweepRow> rows;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    bool slopes_defined = false;
    bool partial = false;  // some rows failed; slopes not fitted
    std::string config_hash;
    std::string sign_choice;
    double lambda_low = 0.0, lambda_high = 0.0;
    double bmo_estimate = 0.0; // dyadic BMO of the skew part (max over entries)
    double a0[16] = {0};       // homogenized matrix, row-major (up to d=4)
    int dim = 0;
};

ConvergenceReport run_sweep(const SweepConfig& config, int jobs = 0);

// Least-squares slope of log(error) against log(eps).
// Throws DegenerateFit on fewer than 3 points or nonpositive errors.
double fit_rate(const std::vector<std::pair<double, double>>& points);

void emit_csv(const ConvergenceReport& report, std::ostream& out);
nlohmann::json structured_report(const ConvergenceReport& report);

std::string sweep_config_hash(const SweepConfig& config);

} // namespace perihom

#endif
