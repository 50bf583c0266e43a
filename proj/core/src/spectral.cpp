#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mpv::detail {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// Planner calls are not thread-safe in FFTW; all plan creation goes through
// this lock.  Plans live for the whole process.
PlanPair plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, r, c, flags);
    p.backward = fftw_plan_dft_c2r_1d(n, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!p.forward || !p.backward) throw std::runtime_error("fftw: plan creation failed");
    cache.emplace(n, p);
    return p;
}

}  // namespace

void fourier_apply(std::span<const double> in, std::span<double> out, double L, const Multiplier& mult) {
    const int n = static_cast<int>(in.size());
    if (out.size() != in.size()) throw std::invalid_argument("fourier_apply: size mismatch");
    const PlanPair p = plans_for(n);
    std::vector<double> buf(in.begin(), in.end());
    std::vector<std::complex<double>> spec(n / 2 + 1);
    auto* cs = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_execute_dft_r2c(p.forward, buf.data(), cs);
    const double base = 2.0 * std::numbers::pi / L;
    for (int k = 0; k <= n / 2; ++k) spec[k] *= mult(k, base * k) / static_cast<double>(n);
    fftw_execute_dft_c2r(p.backward, cs, buf.data());
    std::copy(buf.begin(), buf.end(), out.begin());
}

void fourier_derivative(std::span<const double> in, std::span<double> out, double L) {
    const int n = static_cast<int>(in.size());
    fourier_apply(in, out, L, [n](int k, double w) -> std::complex<double> {
        if (2 * k == n) return 0.0;
        return {0.0, w};
    });
}

}  // namespace mpv::detail
