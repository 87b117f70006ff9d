#ifndef PERIHOM_ERRORS_HPP
#define PERIHOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace perihom {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonElliptic : std::runtime_error {
    double lambda_low;
    explicit NonElliptic(double lo)
        : std::runtime_error("symmetric part is not uniformly elliptic (lambda_low = " +
                             std::to_string(lo) + ")"),
          lambda_low(lo) {}
};

struct NoConvergence : std::runtime_error {
    int iterations;
    double residual;
    NoConvergence(int it, double res)
        : std::runtime_error("Krylov iteration stagnated: " + std::to_string(it) +
                             " iterations, residual " + std::to_string(res)),
          iterations(it), residual(res) {}
};

struct BadEps : std::runtime_error {
    explicit BadEps(double eps)
        : std::runtime_error("eps must be positive, got " + std::to_string(eps)) {}
};

struct IncommensurateEps : std::runtime_error {
    explicit IncommensurateEps(double eps)
        : std::runtime_error("1/eps must be an integer, got eps = " + std::to_string(eps)) {}
};

struct GridTooCoarse : std::runtime_error {
    explicit GridTooCoarse(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalInconsistency : std::runtime_error {
    explicit InternalInconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace perihom

#endif
