#include "perihom/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "perihom/errors.hpp"
#include "perihom/steklov.hpp"

namespace perihom {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

void SweepConfig::validate() const {
    if (eps_denominators.size() < 1) throw ParseError("eps list must be nonempty");
    for (std::size_t i = 1; i < eps_denominators.size(); ++i)
        if (eps_denominators[i] <= eps_denominators[i - 1])
            throw ParseError("eps list must be strictly decreasing (denominators increasing)");
    for (int m : eps_denominators)
        if (m < 1) throw ParseError("eps denominators must be positive integers");
    if (grid_rule < 4) throw ParseError("grid rule must be >= 4");
    if (n_cell < 4) throw ParseError("n_cell must be >= 4");
    if (tol <= 0.0) throw ParseError("tolerance must be positive");
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    SweepConfig c;
    c.coeff = CoefficientField::from_json(j.at("coefficient"));
    c.eps_denominators = j.at("eps_denominators").get<std::vector<int>>();
    if (j.contains("grid_rule")) c.grid_rule = j.at("grid_rule").get<int>();
    if (j.contains("n_cell")) c.n_cell = j.at("n_cell").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("smoothing")) c.smoothing = j.at("smoothing").get<bool>();
    if (j.contains("sign")) {
        const std::string s = j.at("sign").get<std::string>();
        if (s == "paper-2121") c.sign = LSign::Paper2121;
        else if (s == "paper-3250") c.sign = LSign::Paper3250;
        else throw ParseError("unknown sign option: " + s);
    }
    if (j.contains("include_adjoint_term"))
        c.include_adjoint_term = j.at("include_adjoint_term").get<bool>();
    if (j.contains("include_third_order"))
        c.include_third_order = j.at("include_third_order").get<bool>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("bmo_depth")) c.bmo_depth = j.at("bmo_depth").get<int>();
    if (j.contains("datum")) {
        for (const auto& mj : j.at("datum")) {
            FourierMode mode;
            mode.k = mj.at("k").get<std::vector<int>>();
            mode.amp = cplx(mj.value("re", 0.0), mj.value("im", 0.0));
            c.f_modes.push_back(std::move(mode));
        }
    }
    c.validate();
    return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sweep config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sweep config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json j;
    j["coefficient"] = coeff.to_json();
    j["eps_denominators"] = eps_denominators;
    j["grid_rule"] = grid_rule;
    j["n_cell"] = n_cell;
    j["tol"] = tol;
    j["smoothing"] = smoothing;
    j["sign"] = (sign == LSign::Paper3250) ? "paper-3250" : "paper-2121";
    j["include_adjoint_term"] = include_adjoint_term;
    j["include_third_order"] = include_third_order;
    j["seed"] = seed;
    j["bmo_depth"] = bmo_depth;
    nlohmann::json datum = nlohmann::json::array();
    for (const auto& mode : f_modes) {
        nlohmann::json mj;
        mj["k"] = mode.k;
        mj["re"] = mode.amp.real();
        mj["im"] = mode.amp.imag();
        datum.push_back(mj);
    }
    j["datum"] = datum;
    return j;
}

std::string sweep_config_hash(const SweepConfig& config) {
    std::ostringstream hex;
    hex << std::hex << fnv1a(config.to_json().dump());
    return hex.str();
}

TorusField sweep_datum(const SweepConfig& config) {
    const int d = config.coeff.dim();
    const int nf = 8;
    TorusField f(d, nf, 1);
    if (!config.f_modes.empty()) {
        for (const auto& mode : config.f_modes) {
            if (static_cast<int>(mode.k.size()) != d)
                throw ParseError("datum mode dimension mismatch");
            std::vector<int> neg(mode.k.size());
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -mode.k[i];
            f.mode(0, mode.k) += 0.5 * mode.amp;
            f.mode(0, neg) += 0.5 * std::conj(mode.amp);
        }
    } else {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_int_distribution<int> wave(-2, 2);
        int placed = 0;
        while (placed < 3) {
            std::vector<int> k(static_cast<std::size_t>(d));
            bool nonzero = false;
            for (int i = 0; i < d; ++i) {
                k[static_cast<std::size_t>(i)] = wave(rng);
                nonzero = nonzero || k[static_cast<std::size_t>(i)] != 0;
            }
            if (!nonzero) continue;
            const cplx amp(gauss(rng), gauss(rng));
            std::vector<int> neg(k.size());
            for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
            f.mode(0, k) += 0.5 * amp;
            f.mode(0, neg) += 0.5 * std::conj(amp);
            ++placed;
        }
    }
    const double nrm = l2_norm(f);
    if (nrm == 0.0) throw ParseError("datum must be nonzero");
    return (1.0 / nrm) * f;
}

double fit_rate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DegenerateFit("slope fit needs at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [eps, err] : points) {
        if (err <= 0.0) throw DegenerateFit("nonpositive error in slope fit");
        const double x = std::log(eps), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw DegenerateFit("eps values do not vary");
    return (n * sxy - sx * sy) / denom;
}

ConvergenceReport run_sweep(const SweepConfig& config, int jobs) {
    config.validate();
    const CoefficientField& a = config.coeff;
    const int d = a.dim();

    ConvergenceReport rep;
    rep.dim = d;
    rep.config_hash = sweep_config_hash(config);
    rep.sign_choice = (config.sign == LSign::Paper3250) ? "paper-3250" : "paper-2121";

    CellSolution cell = homogenize(a, config.n_cell, config.tol);
    rep.lambda_low = cell.lambda_low;
    rep.lambda_high = cell.lambda_high;
    for (int i = 0; i < d && i < 4; ++i)
        for (int j = 0; j < d && j < 4; ++j) rep.a0[i * 4 + j] = cell.hom.a0(i, j);

    CoefficientField skew = a.split_symmetric().second;
    double bmo = 0.0;
    const int nb = std::max(1 << config.bmo_depth, 4 * std::max(1, a.band()));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (skew.entry(i, j).empty()) continue;
            bmo = std::max(bmo, bmo_seminorm(skew.entry_field(i, j, nb), config.bmo_depth));
        }
    rep.bmo_estimate = bmo;

    TorusField f = sweep_datum(config);
    const int band = std::max(1, a.band());

    rep.rows.resize(config.eps_denominators.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= rep.rows.size()) return;
            SweepRow& row = rep.rows[r];
            const int m = config.eps_denominators[r];
            const double eps = 1.0 / m;
            row.eps = eps;
            const int n = config.grid_rule * m * band;
            row.grid = n;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                SolveStats stats;
                TorusField u_eps = solve_resolvent(a, eps, f, n, config.tol, false, &stats);
                row.residual_osc = stats.rel_residual;
                row.f_l2 = stats.f_l2;
                row.u_l2 = stats.u_l2;
                row.grad_u_l2 = stats.grad_u_l2;

                TorusField u0 = solve_homogenized(cell.hom.a0, resample(f, n));
                row.E0 = l2_norm(u_eps - u0);

                FirstOrderApprox first =
                    first_order_approx(u0, cell.primal, eps, config.smoothing, n);
                const double dl2 = l2_norm(u_eps - first.value);
                const double dh1 = l2_norm(gradient(u_eps) - first.grad);
                row.E1 = std::sqrt(dl2 * dl2 + dh1 * dh1);

                SecondOrderOptions opt;
                opt.smoothing = config.smoothing;
                opt.sign = config.sign;
                opt.include_adjoint_term = config.include_adjoint_term;
                opt.include_third_order = config.include_third_order;
                TorusField second = second_order_approx(f, cell, eps, opt, n);
                row.E2 = l2_norm(u_eps - second);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
            const auto t1 = std::chrono::steady_clock::now();
            row.runtime_ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                    .count();
        }
    };

    if (jobs <= 0) {
        if (const char* env = std::getenv("PERIHOM_JOBS")) jobs = std::atoi(env);
        if (jobs <= 0) jobs = 1;
    }
    jobs = std::min<int>(jobs, static_cast<int>(rep.rows.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    rep.partial = false;
    double err_max = 0.0;
    for (const auto& row : rep.rows) {
        rep.partial = rep.partial || row.failed;
        err_max = std::max({err_max, row.E0, row.E1, row.E2});
    }
    // errors at the Krylov noise floor carry no rate information
    if (!rep.partial && err_max >= 1000.0 * config.tol) {
        try {
            std::vector<std::pair<double, double>> p0, p1, p2;
            for (const auto& row : rep.rows) {
                p0.emplace_back(row.eps, row.E0);
                p1.emplace_back(row.eps, row.E1);
                p2.emplace_back(row.eps, row.E2);
            }
            rep.s0 = fit_rate(p0);
            rep.s1 = fit_rate(p1);
            rep.s2 = fit_rate(p2);
            rep.slopes_defined = true;
        } catch (const DegenerateFit&) {
            rep.slopes_defined = false; // exact case (e.g. constant coefficient)
        }
    }
    return rep;
}

void emit_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "eps, E0, E1, E2, residual_osc, runtime_ms\n";
    out.precision(12);
    for (const auto& row : report.rows) {
        out << row.eps << ", " << row.E0 << ", " << row.E1 << ", " << row.E2 << ", "
            << row.residual_osc << ", " << row.runtime_ms << "\n";
    }
}

nlohmann::json structured_report(const ConvergenceReport& report) {
    nlohmann::json j;
    j["config_hash"] = report.config_hash;
    j["sign"] = report.sign_choice;
    j["lambda_low"] = report.lambda_low;
    j["lambda_high"] = report.lambda_high;
    j["bmo_estimate"] = report.bmo_estimate;
    j["partial"] = report.partial;
    j["slopes_defined"] = report.slopes_defined;
    if (report.slopes_defined) {
        j["s0"] = report.s0;
        j["s1"] = report.s1;
        j["s2"] = report.s2;
    }
    nlohmann::json a0 = nlohmann::json::array();
    for (int i = 0; i < report.dim; ++i)
        for (int k = 0; k < report.dim; ++k) a0.push_back(report.a0[i * 4 + k]);
    j["a0"] = a0;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json rj;
        rj["eps"] = row.eps;
        rj["E0"] = row.E0;
        rj["E1"] = row.E1;
        rj["E2"] = row.E2;
        rj["residual_osc"] = row.residual_osc;
        rj["runtime_ms"] = row.runtime_ms;
        rj["grid"] = row.grid;
        rj["f_l2"] = row.f_l2;
        rj["u_l2"] = row.u_l2;
        rj["grad_u_l2"] = row.grad_u_l2;
        if (row.failed) rj["error"] = row.error;
        rows.push_back(rj);
    }
    j["rows"] = rows;
    return j;
}

} // namespace perihom
