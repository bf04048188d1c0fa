#include <cmath>
#include <vector>

#include "ramanforge/kernels.hpp"

namespace ramanforge::kernels::detail {

cplx lag_overlap_scalar(const cplx* a, std::size_t n, int lag) {
    const auto k = static_cast<std::size_t>(lag);
    if (k >= n) return {0.0, 0.0};
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = a[i + k].real(), bi = a[i + k].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void harmonic_series_scalar(const cplx* coeffs, std::size_t m, int first_index,
                            const double* phases, cplx* out, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
        const double th = phases[j];
        const double zr = std::cos(th), zi = std::sin(th);
        double accr = 0.0, acci = 0.0;
        for (std::size_t q = m; q-- > 0;) {
            const double tr = accr * zr - acci * zi + coeffs[q].real();
            const double ti = accr * zi + acci * zr + coeffs[q].imag();
            accr = tr;
            acci = ti;
        }
        const double sh = static_cast<double>(first_index) * th;
        const double sr = std::cos(sh), si = std::sin(sh);
        out[j] = {accr * sr - acci * si, accr * si + acci * sr};
    }
}

void phasor_mean_scalar(const double* freqs, std::size_t n, double dt, cplx* out,
                        std::size_t steps) {
    std::vector<double> pr(n), pi(n), rr(n), ri(n);
    for (std::size_t i = 0; i < n; ++i) {
        rr[i] = std::cos(freqs[i] * dt);
        ri[i] = std::sin(freqs[i] * dt);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < steps; ++j) {
        if (j % kResyncInterval == 0) {
            const double t = static_cast<double>(j) * dt;
            for (std::size_t i = 0; i < n; ++i) {
                pr[i] = std::cos(freqs[i] * t);
                pi[i] = std::sin(freqs[i] * t);
            }
        }
        const double r0 = pr[0], i0 = pi[0];
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            sr += pr[i] - r0;
            si += pi[i] - i0;
        }
        out[j] = {r0 + sr * inv_n, i0 + si * inv_n};
        for (std::size_t i = 0; i < n; ++i) {
            const double a = pr[i] * rr[i] - pi[i] * ri[i];
            const double b = pr[i] * ri[i] + pi[i] * rr[i];
            pr[i] = a;
            pi[i] = b;
        }
    }
}

}  // namespace ramanforge::kernels::detail
