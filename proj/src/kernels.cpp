#include "ramanforge/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ramanforge::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(RAMANFORGE_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() noexcept {
    if (const char* env = std::getenv("RAMANFORGE_KERNELS")) {
        if (std::string(env) == "scalar") return Backend::Scalar;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend resolve(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("kernel backend not available on this CPU: " +
                                    std::string(backend_name(b)));
    }
    return b;
}

}  // namespace

bool backend_available(Backend b) noexcept {
    return b == Backend::Scalar || cpu_has_avx2();
}

Backend active_backend() noexcept {
    static const Backend chosen = detect();
    return chosen;
}

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

cplx lag_overlap(std::span<const cplx> a, int lag, Backend b) {
    // Negative lag is the conjugate of the positive one.
    if (lag < 0) return std::conj(lag_overlap(a, -lag, b));
    if (resolve(b) == Backend::Avx2) {
#ifdef RAMANFORGE_HAVE_AVX2
        return detail::lag_overlap_avx2(a.data(), a.size(), lag);
#endif
    }
    return detail::lag_overlap_scalar(a.data(), a.size(), lag);
}

void harmonic_series(std::span<const cplx> coeffs, int first_index,
                     std::span<const double> phases, std::span<cplx> out, Backend b) {
    if (out.size() != phases.size()) {
        throw std::invalid_argument("harmonic_series: output and phase spans differ in size");
    }
    if (resolve(b) == Backend::Avx2) {
#ifdef RAMANFORGE_HAVE_AVX2
        detail::harmonic_series_avx2(coeffs.data(), coeffs.size(), first_index, phases.data(),
                                     out.data(), out.size());
        return;
#endif
    }
    detail::harmonic_series_scalar(coeffs.data(), coeffs.size(), first_index, phases.data(),
                                   out.data(), out.size());
}

void phasor_mean(std::span<const double> freqs, double dt, std::span<cplx> out, Backend b) {
    if (freqs.empty()) throw std::invalid_argument("phasor_mean: empty oscillator bank");
    if (resolve(b) == Backend::Avx2) {
#ifdef RAMANFORGE_HAVE_AVX2
        detail::phasor_mean_avx2(freqs.data(), freqs.size(), dt, out.data(), out.size());
        return;
#endif
    }
    detail::phasor_mean_scalar(freqs.data(), freqs.size(), dt, out.data(), out.size());
}

}  // namespace ramanforge::kernels
