#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ramanforge/kernels.hpp"

namespace rk = ramanforge::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_coeffs(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    for (auto& c : v) c = {d(gen), d(gen)};
    return v;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST(Kernels, ScalarBackendAlwaysAvailable) {
    EXPECT_TRUE(rk::backend_available(rk::Backend::Scalar));
    EXPECT_EQ(rk::backend_name(rk::Backend::Scalar), "scalar");
}

TEST(Kernels, LagOverlapMatchesDirectSum) {
    for (std::size_t n : {1u, 3u, 4u, 7u, 61u, 128u}) {
        const auto a = random_coeffs(n, 11 + static_cast<unsigned>(n));
        for (int lag = -static_cast<int>(n) - 1; lag <= static_cast<int>(n) + 1; ++lag) {
            cplx expect = 0.0;
            for (long i = 0; i < static_cast<long>(n); ++i) {
                const long j = i + lag;
                if (j >= 0 && j < static_cast<long>(n)) expect += std::conj(a[i]) * a[j];
            }
            const cplx got = rk::lag_overlap(a, lag, rk::Backend::Scalar);
            EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-12 * (1.0 + std::abs(expect))) << "n=" << n << " lag=" << lag;
        }
    }
}

TEST(Kernels, HarmonicSeriesMatchesDirectSum) {
    const auto c = random_coeffs(9, 5);
    std::vector<double> phases{0.0, 0.3, -1.7, 2.9, 6.0, 100.25, 1e3};
    std::vector<cplx> out(phases.size());
    rk::harmonic_series(c, -4, phases, out, rk::Backend::Scalar);
    for (std::size_t j = 0; j < phases.size(); ++j) {
        cplx expect = 0.0;
        for (int m = 0; m < 9; ++m) expect += c[m] * std::polar(1.0, (m - 4) * phases[j]);
        EXPECT_LT(std::abs(out[j] - expect), 1e-11) << j;
    }
}

TEST(Kernels, PhasorMeanMatchesDirectSum) {
    std::vector<double> freqs{1.0, 1.01, 0.97, 1.3, 0.5};
    const double dt = 0.05;
    std::vector<cplx> out(1000);
    rk::phasor_mean(freqs, dt, out, rk::Backend::Scalar);
    for (std::size_t j = 0; j < out.size(); j += 37) {
        cplx expect = 0.0;
        for (double f : freqs) expect += std::polar(1.0, f * static_cast<double>(j) * dt);
        expect /= static_cast<double>(freqs.size());
        EXPECT_LT(std::abs(out[j] - expect), 1e-12) << j;
    }
}

TEST(Kernels, PhasorMeanOfIdenticalBankIsExactSinglePhasor) {
    std::vector<double> one{2.5};
    std::vector<double> bank(13, 2.5);
    std::vector<cplx> a(700), b(700);
    rk::phasor_mean(one, 0.01, a, rk::Backend::Scalar);
    rk::phasor_mean(bank, 0.01, b, rk::Backend::Scalar);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j], b[j]);
}

class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!rk::backend_available(rk::Backend::Avx2)) GTEST_SKIP() << "AVX2 not available on this machine";
    }
};

TEST_F(KernelEquivalence, LagOverlap) {
    for (std::size_t n : {1u, 2u, 5u, 8u, 31u, 64u, 257u}) {
        const auto a = random_coeffs(n, 100 + static_cast<unsigned>(n));
        for (int lag = -3; lag <= 3; ++lag) {
            const cplx s = rk::lag_overlap(a, lag, rk::Backend::Scalar);
            const cplx v = rk::lag_overlap(a, lag, rk::Backend::Avx2);
            EXPECT_LE(std::abs(s - v), 1e-13 * (1.0 + static_cast<double>(n))) << "n=" << n << " lag=" << lag;
        }
    }
}

TEST_F(KernelEquivalence, HarmonicSeries) {
    for (std::size_t m : {1u, 4u, 17u, 81u}) {
        const auto c = random_coeffs(m, 7 + static_cast<unsigned>(m));
        std::vector<double> phases(103);
        for (std::size_t j = 0; j < phases.size(); ++j) phases[j] = 0.061 * static_cast<double>(j) - 2.0;
        std::vector<cplx> s(phases.size()), v(phases.size());
        const int first = -static_cast<int>(m / 2);
        rk::harmonic_series(c, first, phases, s, rk::Backend::Scalar);
        rk::harmonic_series(c, first, phases, v, rk::Backend::Avx2);
        const double scale = 1.0 + max_abs(s);
        for (std::size_t j = 0; j < s.size(); ++j) EXPECT_LE(std::abs(s[j] - v[j]), 1e-12 * scale) << m << " " << j;
    }
}

TEST_F(KernelEquivalence, PhasorMean) {
    for (std::size_t n : {1u, 3u, 4u, 9u, 600u}) {
        std::mt19937_64 gen(n);
        std::normal_distribution<double> d(1.0e6, 2.0e4);
        std::vector<double> freqs(n);
        for (auto& f : freqs) f = d(gen);
        std::vector<cplx> s(2001), v(2001);
        rk::phasor_mean(freqs, 5e-9, s, rk::Backend::Scalar);
        rk::phasor_mean(freqs, 5e-9, v, rk::Backend::Avx2);
        for (std::size_t j = 0; j < s.size(); ++j) EXPECT_LE(std::abs(s[j] - v[j]), 1e-12) << n << " " << j;
    }
}

TEST(Kernels, EmptyInputs) {
    std::vector<cplx> none;
    EXPECT_EQ(rk::lag_overlap(none, 0, rk::Backend::Scalar), cplx(0.0));
    std::vector<double> f{1.0};
    std::vector<cplx> out;
    rk::phasor_mean(f, 0.1, out, rk::Backend::Scalar);
    SUCCEED();
}
