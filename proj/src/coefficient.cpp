#include "perihom/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "perihom/errors.hpp"

namespace perihom {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;

std::size_t ipow(int n, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(n);
    return r;
}
} // namespace

CoefficientField::CoefficientField(int dim)
    : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim) {
    if (dim < 1) throw ParseError("dim must be >= 1");
}

CoefficientField CoefficientField::identity(int dim) {
    return constant(Mat(dim, 1.0));
}

CoefficientField CoefficientField::constant(const Mat& m) {
    CoefficientField f(m.dim());
    std::vector<int> k0(static_cast<std::size_t>(m.dim()), 0);
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            if (m(i, j) != 0.0) f.add_mode(i, j, k0, cplx(m(i, j), 0.0));
    return f;
}

std::vector<FourierMode>& CoefficientField::entry_mut(int i, int j) {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
}

const std::vector<FourierMode>& CoefficientField::entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
}

void CoefficientField::add_mode(int i, int j, std::vector<int> k, cplx amp) {
    auto& e = entry_mut(i, j);
    for (auto& m : e) {
        if (m.k == k) {
            m.amp += amp;
            return;
        }
    }
    e.push_back(FourierMode{std::move(k), amp});
}

void CoefficientField::add_real_mode(int i, int j, const std::vector<int>& k, cplx half_amp) {
    std::vector<int> mk(k.size());
    for (std::size_t t = 0; t < k.size(); ++t) mk[t] = -k[t];
    add_mode(i, j, k, half_amp);
    add_mode(i, j, mk, std::conj(half_amp));
}

int CoefficientField::band() const {
    int b = 0;
    for (const auto& e : entries_)
        for (const auto& m : e)
            for (int kj : m.k) b = std::max(b, std::abs(kj));
    return b;
}

Mat CoefficientField::mean() const {
    Mat m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (const auto& md : entry(i, j)) {
                bool zero = true;
                for (int kj : md.k) zero = zero && kj == 0;
                if (zero) m(i, j) += std::real(md.amp);
            }
    return m;
}

Mat CoefficientField::evaluate(const std::vector<double>& y) const {
    Mat m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            double s = 0.0;
            for (const auto& md : entry(i, j)) {
                double phase = 0.0;
                for (int t = 0; t < dim_; ++t) phase += md.k[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
                s += std::real(md.amp * std::exp(cplx(0.0, TWO_PI * phase)));
            }
            m(i, j) = s;
        }
    return m;
}

std::pair<CoefficientField, CoefficientField> CoefficientField::split_symmetric() const {
    CoefficientField s(dim_), b(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            for (const auto& m : entry(i, j)) {
                s.add_mode(i, j, m.k, 0.5 * m.amp);
                b.add_mode(i, j, m.k, 0.5 * m.amp);
            }
            for (const auto& m : entry(j, i)) {
                s.add_mode(i, j, m.k, 0.5 * m.amp);
                b.add_mode(i, j, m.k, -0.5 * m.amp);
            }
        }
    return {s, b};
}

CoefficientField CoefficientField::transpose() const {
    CoefficientField t(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (const auto& m : entry(i, j)) t.add_mode(j, i, m.k, m.amp);
    return t;
}

bool CoefficientField::is_symmetric(double tol) const {
    auto [s, b] = split_symmetric();
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (const auto& m : b.entry(i, j))
                if (std::abs(m.amp) > tol) return false;
    return true;
}

namespace {

// Exact point values of a trigonometric polynomial on an N-per-axis grid;
// modes are wrapped, which leaves sample values intact even if N is coarse.
std::vector<double> wrap_sample_entry(const std::vector<FourierMode>& modes, int dim, int N, int scale) {
    TorusField f(dim, N, 1);
    std::vector<int> k(static_cast<std::size_t>(dim));
    for (const auto& m : modes) {
        for (int t = 0; t < dim; ++t) k[static_cast<std::size_t>(t)] = m.k[static_cast<std::size_t>(t)] * scale;
        f.mode(0, k) += m.amp;
    }
    auto phys = to_physical(f);
    return phys;
}

} // namespace

std::pair<double, double> CoefficientField::ellipticity_constant(int grid_resolution) const {
    if (grid_resolution < 2) throw ParseError("grid_resolution must be >= 2");
    auto [s, b] = split_symmetric();
    (void)b;
    const std::size_t npts = ipow(grid_resolution, dim_);
    std::vector<std::vector<double>> phys(static_cast<std::size_t>(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            phys[static_cast<std::size_t>(i) * dim_ + j] =
                wrap_sample_entry(s.entry(i, j), dim_, grid_resolution, 1);
    double lo = 0.0, hi = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
        Mat m(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m(i, j) = phys[static_cast<std::size_t>(i) * dim_ + j][p];
        auto [l, h] = sym_eig_range(m);
        if (p == 0) { lo = l; hi = h; }
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    if (lo <= 0.0) throw NonElliptic(lo);
    return {lo, hi};
}

TorusField CoefficientField::entry_field(int i, int j, int n) const {
    if (n <= 2 * band()) throw GridTooCoarse("grid " + std::to_string(n) +
                                             " cannot hold coefficient band " + std::to_string(band()));
    TorusField f(dim_, n, 1);
    for (const auto& m : entry(i, j)) f.mode(0, m.k) += m.amp;
    return f;
}

std::vector<std::vector<double>> CoefficientField::sample_scaled(int M, int m) const {
    if (M <= 2 * band() * m)
        throw GridTooCoarse("grid " + std::to_string(M) + " cannot resolve oscillation " +
                            std::to_string(m) + " of coefficient band " + std::to_string(band()));
    std::vector<std::vector<double>> out(static_cast<std::size_t>(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            out[static_cast<std::size_t>(i) * dim_ + j] = wrap_sample_entry(entry(i, j), dim_, M, m);
    return out;
}

void CoefficientField::validate() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            std::map<std::vector<int>, cplx> amp;
            for (const auto& m : entry(i, j)) amp[m.k] += m.amp;
            for (const auto& [k, a] : amp) {
                std::vector<int> mk(k.size());
                for (std::size_t t = 0; t < k.size(); ++t) mk[t] = -k[t];
                cplx partner = amp.count(mk) ? amp.at(mk) : cplx(0.0, 0.0);
                if (std::abs(partner - std::conj(a)) > 1e-12 * std::max(1.0, std::abs(a)))
                    throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") is not conjugate-symmetric: real fields need amp(-k) = conj(amp(k))");
            }
        }
}

CoefficientField CoefficientField::from_json(const nlohmann::json& j) {
    if (!j.contains("dim")) throw ParseError("coefficient spec: missing 'dim'");
    const int dim = j.at("dim").get<int>();
    CoefficientField f(dim);
    if (j.contains("entries")) {
        const auto& ent = j.at("entries");
        if (static_cast<int>(ent.size()) != dim) throw ParseError("entries must be a dim x dim array");
        for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(ent[static_cast<std::size_t>(i)].size()) != dim)
                throw ParseError("entries must be a dim x dim array");
            for (int jj = 0; jj < dim; ++jj) {
                for (const auto& md : ent[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)]) {
                    std::vector<int> k = md.at("k").get<std::vector<int>>();
                    if (static_cast<int>(k.size()) != dim) throw ParseError("mode wave vector has wrong length");
                    double re = md.value("re", 0.0), im = md.value("im", 0.0);
                    f.add_mode(i, jj, std::move(k), cplx(re, im));
                }
            }
        }
    } else if (j.contains("grid")) {
        const auto& g = j.at("grid");
        const int n = g.at("n").get<int>();
        auto samples = g.at("samples").get<std::vector<double>>();
        const std::size_t per = ipow(n, dim);
        if (samples.size() != static_cast<std::size_t>(dim) * dim * per)
            throw ParseError("grid samples: expected dim*dim*n^dim values");
        for (int i = 0; i < dim; ++i)
            for (int jj = 0; jj < dim; ++jj) {
                std::vector<double> one(samples.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(i) * dim + jj) * per),
                                        samples.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(i) * dim + jj + 1) * per));
                TorusField tf = from_physical(dim, n, 1, one);
                std::vector<int> k(static_cast<std::size_t>(dim));
                for (std::size_t idx = 0; idx < tf.npoints(); ++idx) {
                    tf.wavevector(idx, k.data());
                    cplx a = tf.comp(0)[idx];
                    if (std::abs(a) > 1e-14) f.add_mode(i, jj, k, a);
                }
            }
    } else {
        throw ParseError("coefficient spec: need 'entries' or 'grid'");
    }
    f.validate();
    return f;
}

nlohmann::json CoefficientField::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    nlohmann::json ent = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int jj = 0; jj < dim_; ++jj) {
            nlohmann::json lst = nlohmann::json::array();
            for (const auto& m : entry(i, jj))
                lst.push_back({{"k", m.k}, {"re", m.amp.real()}, {"im", m.amp.imag()}});
            row.push_back(lst);
        }
        ent.push_back(row);
    }
    j["entries"] = ent;
    return j;
}

CoefficientField CoefficientField::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open coefficient file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("bad coefficient file " + path + ": " + e.what());
    }
    return from_json(j);
}

double bmo_seminorm(const std::vector<double>& samples, int dim, int max_depth) {
    const int N = 1 << max_depth;
    const std::size_t npts = ipow(N, dim);
    if (samples.size() != npts)
        throw ParseError("bmo_seminorm: expected 2^max_depth samples per axis");

    // Tile to a (2N)^dim array so periodic cubes are contiguous index ranges.
    const int T = 2 * N;
    std::vector<double> tiled(ipow(T, dim));
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (std::size_t p = 0; p < tiled.size(); ++p) {
        std::size_t rem = p, src = 0;
        for (int j = dim - 1; j >= 0; --j) {
            int ij = static_cast<int>(rem % static_cast<std::size_t>(T)) % N;
            rem /= static_cast<std::size_t>(T);
            idx[static_cast<std::size_t>(j)] = ij;
        }
        for (int j = 0; j < dim; ++j) src = src * static_cast<std::size_t>(N) + static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]);
        tiled[p] = samples[src];
    }

    double best = 0.0;
    for (int depth = 0; depth <= max_depth; ++depth) {
        const int s = N >> depth; // samples per axis inside the cube
        // Flat offsets of the cube's sample set in the tiled array.
        std::vector<std::size_t> offs;
        offs.reserve(ipow(s, dim));
        std::vector<int> q(static_cast<std::size_t>(dim), 0);
        for (;;) {
            std::size_t o = 0;
            for (int j = 0; j < dim; ++j) o = o * static_cast<std::size_t>(T) + static_cast<std::size_t>(q[static_cast<std::size_t>(j)]);
            offs.push_back(o);
            int j = dim - 1;
            while (j >= 0 && ++q[static_cast<std::size_t>(j)] == s) { q[static_cast<std::size_t>(j)] = 0; --j; }
            if (j < 0) break;
        }
        const double inv = 1.0 / static_cast<double>(offs.size());

        const std::size_t ntrans = (s == N) ? 1 : npts;
        std::vector<int> p(static_cast<std::size_t>(dim), 0);
        for (std::size_t t = 0; t < ntrans; ++t) {
            std::size_t base = 0;
            for (int j = 0; j < dim; ++j) base = base * static_cast<std::size_t>(T) + static_cast<std::size_t>(p[static_cast<std::size_t>(j)]);
            double m = 0.0;
            for (std::size_t o : offs) m += tiled[base + o];
            m *= inv;
            double osc = 0.0;
            for (std::size_t o : offs) osc += std::abs(tiled[base + o] - m);
            osc *= inv;
            best = std::max(best, osc);
            int j = dim - 1;
            while (j >= 0 && ++p[static_cast<std::size_t>(j)] == N) { p[static_cast<std::size_t>(j)] = 0; --j; }
        }
    }
    return best;
}

double bmo_seminorm(const TorusField& g, int max_depth) {
    const int N = 1 << max_depth;
    // Exact point sampling with mode wrap-around.
    TorusField f(g.dim(), N, 1);
    std::vector<int> k(static_cast<std::size_t>(g.dim()));
    for (std::size_t idx = 0; idx < g.npoints(); ++idx) {
        g.wavevector(idx, k.data());
        f.mode(0, k) += g.comp(0)[idx];
    }
    return bmo_seminorm(to_physical(f), g.dim(), max_depth);
}

} // namespace perihom
