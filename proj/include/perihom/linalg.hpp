#ifndef PERIHOM_LINALG_HPP
#define PERIHOM_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace perihom {

// Small dense d x d real matrix, row-major.
class Mat {
public:
    Mat() : d_(0) {}
    explicit Mat(int d, double diag = 0.0) : d_(d), a_(static_cast<std::size_t>(d) * d, 0.0) {
        for (int i = 0; i < d; ++i) (*this)(i, i) = diag;
    }
    int dim() const { return d_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * d_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * d_ + j]; }

    Mat transpose() const {
        Mat t(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Mat sym() const {
        Mat s(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
        return s;
    }
    Mat skew() const {
        Mat s(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) s(i, j) = 0.5 * ((*this)(i, j) - (*this)(j, i));
        return s;
    }
    Mat operator+(const Mat& o) const {
        Mat r(d_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r(d_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    double quad(const std::vector<double>& x) const { // x . A x
        double s = 0.0;
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) s += x[static_cast<std::size_t>(i)] * (*this)(i, j) * x[static_cast<std::size_t>(j)];
        return s;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    int d_;
    std::vector<double> a_;
};

// Eigenvalue range of a symmetric matrix via cyclic Jacobi rotations.
inline std::pair<double, double> sym_eig_range(Mat s) {
    const int d = s.dim();
    if (d == 1) return {s(0, 0), s(0, 0)};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                if (std::abs(s(p, q)) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * s(p, q), s(q, q) - s(p, p));
                const double c = std::cos(theta), sn = std::sin(theta);
                for (int k = 0; k < d; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < d; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    double lo = s(0, 0), hi = s(0, 0);
    for (int i = 1; i < d; ++i) {
        lo = std::min(lo, s(i, i));
        hi = std::max(hi, s(i, i));
    }
    return {lo, hi};
}

} // namespace perihom

#endif
