#include "perihom/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace perihom {
namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    std::vector<int> dims(static_cast<std::size_t>(dim), n);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    // Plan on a scratch buffer; FFTW_UNALIGNED lets us execute on any array later.
    std::vector<cplx> scratch(total);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(dim, dims.data(), ptr, ptr, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

} // namespace

void fft_analysis(int dim, int n, cplx* data) {
    fftw_plan p = get_plan(dim, n, FFTW_FORWARD);
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, ptr, ptr);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

void fft_synthesis(int dim, int n, cplx* data) {
    fftw_plan p = get_plan(dim, n, FFTW_BACKWARD);
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, ptr, ptr);
}

} // namespace perihom
