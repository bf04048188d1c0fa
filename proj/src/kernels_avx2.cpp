// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after the
// runtime CPUID check in kernels.cpp.

#include <immintrin.h>

#include <cmath>
#include <vector>

#include "ramanforge/kernels.hpp"

namespace ramanforge::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cplx lag_overlap_avx2(const cplx* a, std::size_t n, int lag) {
    const auto k = static_cast<std::size_t>(lag);
    if (k >= n) return {0.0, 0.0};
    const std::size_t pairs = n - k;
    const auto* x = reinterpret_cast<const double*>(a);
    const auto* y = reinterpret_cast<const double*>(a + k);

    __m256d acc_re = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
    __m256d acc_im = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
    std::size_t i = 0;
    for (; i + 2 <= pairs; i += 2) {
        const __m256d X = _mm256_loadu_pd(x + 2 * i);
        const __m256d Y = _mm256_loadu_pd(y + 2 * i);
        const __m256d Ys = _mm256_permute_pd(Y, 0b0101);
        acc_re = _mm256_fmadd_pd(X, Y, acc_re);
        acc_im = _mm256_fmadd_pd(X, Ys, acc_im);
    }
    alignas(32) double im_lanes[4];
    _mm256_store_pd(im_lanes, acc_im);
    double re = hsum(acc_re);
    double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
    for (; i < pairs; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = a[i + k].real(), bi = a[i + k].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void harmonic_series_avx2(const cplx* coeffs, std::size_t m, int first_index,
                          const double* phases, cplx* out, std::size_t count) {
    std::size_t j = 0;
    alignas(32) double zr[4], zi[4], sr[4], si[4], rr[4], ri[4];
    for (; j + 4 <= count; j += 4) {
        for (int l = 0; l < 4; ++l) {
            const double th = phases[j + l];
            zr[l] = std::cos(th);
            zi[l] = std::sin(th);
            const double sh = static_cast<double>(first_index) * th;
            sr[l] = std::cos(sh);
            si[l] = std::sin(sh);
        }
        const __m256d Zr = _mm256_load_pd(zr);
        const __m256d Zi = _mm256_load_pd(zi);
        __m256d Ar = _mm256_setzero_pd();
        __m256d Ai = _mm256_setzero_pd();
        for (std::size_t q = m; q-- > 0;) {
            const __m256d Cr = _mm256_set1_pd(coeffs[q].real());
            const __m256d Ci = _mm256_set1_pd(coeffs[q].imag());
            // (Ar + i Ai)(Zr + i Zi) + C
            const __m256d Tr = _mm256_fmadd_pd(Ar, Zr, _mm256_fnmadd_pd(Ai, Zi, Cr));
            const __m256d Ti = _mm256_fmadd_pd(Ar, Zi, _mm256_fmadd_pd(Ai, Zr, Ci));
            Ar = Tr;
            Ai = Ti;
        }
        const __m256d Sr = _mm256_load_pd(sr);
        const __m256d Si = _mm256_load_pd(si);
        _mm256_store_pd(rr, _mm256_fmsub_pd(Ar, Sr, _mm256_mul_pd(Ai, Si)));
        _mm256_store_pd(ri, _mm256_fmadd_pd(Ar, Si, _mm256_mul_pd(Ai, Sr)));
        for (int l = 0; l < 4; ++l) out[j + l] = {rr[l], ri[l]};
    }
    if (j < count) {
        harmonic_series_scalar(coeffs, m, first_index, phases + j, out + j, count - j);
    }
}

void phasor_mean_avx2(const double* freqs, std::size_t n, double dt, cplx* out,
                      std::size_t steps) {
    // Phasor arrays padded to a multiple of 4; pad lanes mirror oscillator 0 so
    // their deviation contribution is exactly zero.
    const std::size_t padded = (n + 3) / 4 * 4;
    std::vector<double> f(padded, freqs[0]);
    for (std::size_t i = 0; i < n; ++i) f[i] = freqs[i];
    std::vector<double> pr(padded), pi(padded), rr(padded), ri(padded);
    for (std::size_t i = 0; i < padded; ++i) {
        rr[i] = std::cos(f[i] * dt);
        ri[i] = std::sin(f[i] * dt);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < steps; ++j) {
        if (j % kResyncInterval == 0) {
            const double t = static_cast<double>(j) * dt;
            for (std::size_t i = 0; i < padded; ++i) {
                pr[i] = std::cos(f[i] * t);
                pi[i] = std::sin(f[i] * t);
            }
        }
        const double r0 = pr[0], i0 = pi[0];
        const __m256d R0 = _mm256_set1_pd(r0);
        const __m256d I0 = _mm256_set1_pd(i0);
        __m256d Sr = _mm256_setzero_pd();
        __m256d Si = _mm256_setzero_pd();
        for (std::size_t i = 0; i < padded; i += 4) {
            __m256d Pr = _mm256_loadu_pd(&pr[i]);
            __m256d Pi = _mm256_loadu_pd(&pi[i]);
            Sr = _mm256_add_pd(Sr, _mm256_sub_pd(Pr, R0));
            Si = _mm256_add_pd(Si, _mm256_sub_pd(Pi, I0));
            const __m256d Rr = _mm256_loadu_pd(&rr[i]);
            const __m256d Ri = _mm256_loadu_pd(&ri[i]);
            const __m256d Nr = _mm256_fmsub_pd(Pr, Rr, _mm256_mul_pd(Pi, Ri));
            const __m256d Ni = _mm256_fmadd_pd(Pr, Ri, _mm256_mul_pd(Pi, Rr));
            _mm256_storeu_pd(&pr[i], Nr);
            _mm256_storeu_pd(&pi[i], Ni);
        }
        out[j] = {r0 + hsum(Sr) * inv_n, i0 + hsum(Si) * inv_n};
    }
}

}  // namespace ramanforge::kernels::detail
