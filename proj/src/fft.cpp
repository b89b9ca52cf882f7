#include "hawkeslab/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <unordered_map>

namespace hawkeslab {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair plans_for(std::size_t n) {
    static std::unordered_map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> re(n);
    std::vector<std::complex<double>> cx(n / 2 + 1);
    PlanPair p;
    p.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(),
                                 reinterpret_cast<fftw_complex*>(cx.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(cx.data()),
                                 re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t out_n = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out_n);
    const PlanPair plans = plans_for(n);

    std::vector<double> pa(n, 0.0), pb(n, 0.0);
    std::memcpy(pa.data(), a.data(), a.size() * sizeof(double));
    std::memcpy(pb.data(), b.data(), b.size() * sizeof(double));

    std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
    fftw_execute_dft_r2c(plans.fwd, pa.data(), reinterpret_cast<fftw_complex*>(fa.data()));
    fftw_execute_dft_r2c(plans.fwd, pb.data(), reinterpret_cast<fftw_complex*>(fb.data()));
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fftw_execute_dft_c2r(plans.bwd, reinterpret_cast<fftw_complex*>(fa.data()), pa.data());

    const double scale = 1.0 / static_cast<double>(n);
    std::vector<double> out(out_n);
    for (std::size_t i = 0; i < out_n; ++i) out[i] = pa[i] * scale;
    return out;
}

std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

constexpr std::size_t kDirectOpsLimit = 1u << 22;

}  // namespace

std::vector<double> convolve_full(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() <= kDirectOpsLimit) return convolve_direct(a, b);
    return convolve_fft(a, b);
}

std::vector<double> convolve_causal(const std::vector<double>& x, const std::vector<double>& kernel) {
    if (x.empty()) return {};
    auto full = convolve_full(x, kernel);
    full.resize(x.size());
    return full;
}

}  // namespace hawkeslab
