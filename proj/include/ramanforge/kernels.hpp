#pragma once

// Data-parallel inner loops shared by the spectrum, dynamics and ensemble code.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2+FMA variant compiled in a separate translation unit. The variant is
// chosen once at runtime from CPUID; RAMANFORGE_KERNELS=scalar forces the
// reference path. Both paths run the same algorithm in the same order, so they
// agree to rounding (FMA contraction is the only difference).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace ramanforge::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;
std::string_view backend_name(Backend b) noexcept;

// sum_n conj(a[n]) * a[n + lag]  for 0 <= n, n + lag < a.size().  lag may be negative.
cplx lag_overlap(std::span<const cplx> a, int lag, Backend b = active_backend());

// out[j] = sum_m coeffs[m] * exp(i * (first_index + m) * phases[j])
void harmonic_series(std::span<const cplx> coeffs, int first_index,
                     std::span<const double> phases, std::span<cplx> out,
                     Backend b = active_backend());

// Mean phasor of a bank of oscillators on a uniform time grid:
//   out[j] = (1/N) sum_i exp(i * freqs[i] * j * dt),   j = 0 .. out.size()-1
// The mean is accumulated as freqs[0]'s phasor plus the mean deviation from it,
// so a bank of identical oscillators reproduces the single-oscillator phasor
// bit for bit. Phasors are advanced by complex rotation and re-anchored with
// exact sincos every kResyncInterval steps.
void phasor_mean(std::span<const double> freqs, double dt, std::span<cplx> out,
                 Backend b = active_backend());

inline constexpr std::size_t kResyncInterval = 256;

namespace detail {
// Per-backend entry points; the public functions above dispatch to these.
cplx lag_overlap_scalar(const cplx* a, std::size_t n, int lag);
void harmonic_series_scalar(const cplx* coeffs, std::size_t m, int first_index,
                            const double* phases, cplx* out, std::size_t count);
void phasor_mean_scalar(const double* freqs, std::size_t n, double dt, cplx* out,
                        std::size_t steps);

cplx lag_overlap_avx2(const cplx* a, std::size_t n, int lag);
void harmonic_series_avx2(const cplx* coeffs, std::size_t m, int first_index,
                          const double* phases, cplx* out, std::size_t count);
void phasor_mean_avx2(const double* freqs, std::size_t n, double dt, cplx* out,
                      std::size_t steps);
}  // namespace detail

}  // namespace ramanforge::kernels
