#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ramanforge/errors.hpp"
#include "ramanforge/special_functions.hpp"
#include "ramanforge/spectrum.hpp"

namespace sp = ramanforge::spectrum;
namespace sf = ramanforge::special;
using cplx = std::complex<double>;

TEST(SidebandSpectrum, StoresAmplitudesDensely) {
    sp::SidebandSpectrum s(2, 3.0, 4.0);
    s.set_amplitude(-2, {1.0, 0.0});
    s.set_amplitude(1, {0.0, 2.0});
    EXPECT_EQ(s.dense().size(), 5u);
    EXPECT_EQ(s.amplitude(-2), cplx(1.0, 0.0));
    EXPECT_EQ(s.amplitude(1), cplx(0.0, 2.0));
    EXPECT_EQ(s.amplitude(7), cplx(0.0));
    EXPECT_DOUBLE_EQ(s.total_power(), 5.0);
    EXPECT_EQ(s.significant_extent(), 2);
    EXPECT_THROW(s.set_amplitude(3, 1.0), ramanforge::ConfigurationError);
    EXPECT_THROW(sp::SidebandSpectrum(-1, 1.0), ramanforge::ConfigurationError);
    EXPECT_THROW(sp::SidebandSpectrum(1, 1.0, 0.0), ramanforge::ConfigurationError);
}

TEST(SidebandSpectrum, NormalizedMovesPowerIntoScale) {
    sp::SidebandSpectrum s(1, 1.0, 2.0);
    s.set_amplitude(0, 3.0);
    s.set_amplitude(1, 4.0);
    const auto n = s.normalized();
    EXPECT_NEAR(n.total_power(), 1.0, 1e-15);
    EXPECT_NEAR(n.carrier_power_scale(), 50.0, 1e-12);
    EXPECT_THROW(sp::SidebandSpectrum(1, 1.0).normalized(), ramanforge::DegenerateInputError);
}

TEST(PhaseModulate, AmplitudesAreBesselValues) {
    const auto s = sp::phase_modulate(1.3, 2.0, 40);
    for (int n = -40; n <= 40; ++n) EXPECT_DOUBLE_EQ(s.amplitude(n).real(), sf::bessel_j(n, 1.3));
    EXPECT_NEAR(s.total_power(), 1.0, 1e-14);
    EXPECT_THROW(sp::phase_modulate(7.0, 1.0, 40), ramanforge::DomainError);
    EXPECT_THROW(sp::phase_modulate(3.0, 1.0, 10), ramanforge::TruncationError);
}

TEST(PhaseModulate, WaveformIsPurePhase) {
    const double beta = 2.2, w = 1.7;
    const auto s = sp::phase_modulate(beta, w, sf::default_truncation(beta));
    const auto t = sp::beat_period_grid(s, 97);
    const auto field = sp::field_waveform(s, t);
    const auto inten = sp::intensity_waveform(s, t);
    for (std::size_t j = 0; j < t.size(); ++j) {
        const cplx expect = std::polar(1.0, beta * std::sin(w * t[j]));
        EXPECT_LT(std::abs(field[j] - expect), 1e-12) << j;
        EXPECT_NEAR(inten[j], 1.0, 1e-12);
    }
}

TEST(PhaseModulate, NoIntensityModulation) {
    for (double beta : {0.5, 1.5, 3.0, 6.0}) {
        const auto s = sp::phase_modulate(beta, 1.0, sf::default_truncation(beta));
        for (int k = 1; k <= 3; ++k) EXPECT_LT(std::abs(sp::lag_overlap(s, k)), 1e-12) << beta << " " << k;
    }
}

TEST(QuadraticPhase, AmEfficiencyIsBesselOfChirpedArgument) {
    for (double beta : {0.4, 1.336, 2.5}) {
        for (double alpha : {0.2, 0.76, 1.5, 2.9}) {
            const auto s = sp::apply_quadratic_phase(sp::phase_modulate(beta, 1.0, sf::default_truncation(beta)), alpha);
            const double expect = std::abs(sf::bessel_j(1, 2.0 * beta * std::sin(alpha)));
            EXPECT_NEAR(sp::am_efficiency(s, 1), expect, 1e-12) << beta << " " << alpha;
        }
    }
}

TEST(QuadraticPhase, PreservesPower) {
    const auto s = sp::phase_modulate(1.1, 1.0, 40);
    EXPECT_NEAR(sp::apply_quadratic_phase(s, 0.9).total_power(), s.total_power(), 1e-15);
}

TEST(Filters, RemoveCarrierAndOddSidebands) {
    const auto s = sp::phase_modulate(1.2, 1.0, 35);
    const auto nc = sp::apply_filter(s, sp::RemoveCarrier{});
    EXPECT_EQ(nc.amplitude(0), cplx(0.0));
    EXPECT_NEAR(nc.total_power(), 1.0 - std::pow(sf::bessel_j(0, 1.2), 2), 1e-14);
    const auto even = sp::apply_filter(s, sp::RemoveOddSidebands{});
    EXPECT_NEAR(even.total_power(), 0.5 * (1.0 + sf::bessel_j(0, 2.4)), 1e-14);
    const auto keep = sp::apply_filter(s, sp::KeepIndices{{-1, 1}});
    EXPECT_NEAR(keep.total_power(), 2.0 * std::pow(sf::bessel_j(1, 1.2), 2), 1e-14);
    EXPECT_THROW(sp::apply_filter(s, sp::KeepIndices{}), ramanforge::ConfigurationError);
    sp::SidebandSpectrum only_carrier(1, 1.0);
    only_carrier.set_amplitude(0, 1.0);
    EXPECT_THROW(sp::apply_filter(only_carrier, sp::RemoveCarrier{}), ramanforge::DegenerateInputError);
}

TEST(LagOverlap, TwoToneBeat) {
    sp::SidebandSpectrum s(1, 1.0);
    s.set_amplitude(-1, std::sqrt(0.5));
    s.set_amplitude(1, cplx(0.0, std::sqrt(0.5)));
    EXPECT_NEAR(std::abs(sp::lag_overlap(s, 2)), 0.5, 1e-15);
    EXPECT_NEAR(sp::am_efficiency(s, 2), 0.5, 1e-15);
    EXPECT_NEAR(sp::am_efficiency(s, 1), 0.0, 1e-15);
    EXPECT_THROW(sp::am_efficiency(s, 0), ramanforge::DomainError);
}

TEST(GlobalPhase, LeavesOverlapMagnitudeUnchanged) {
    const auto s = sp::apply_quadratic_phase(sp::phase_modulate(1.0, 1.0, 31), 0.76);
    const auto r = s.with_global_phase(1.234);
    EXPECT_NEAR(std::abs(sp::lag_overlap(r, 1)), std::abs(sp::lag_overlap(s, 1)), 1e-15);
}

TEST(SpectrumJson, RoundTrip) {
    const auto s = sp::apply_quadratic_phase(sp::phase_modulate(0.8, 2.5, 31), 0.3).with_power_scale(7.0);
    const auto back = sp::spectrum_from_json(sp::to_json(s));
    EXPECT_EQ(back.n_max(), s.n_max());
    EXPECT_EQ(back.mod_frequency(), s.mod_frequency());
    EXPECT_EQ(back.carrier_power_scale(), s.carrier_power_scale());
    for (int n = -s.n_max(); n <= s.n_max(); ++n) EXPECT_EQ(back.amplitude(n), s.amplitude(n));
    EXPECT_THROW(sp::spectrum_from_json(nlohmann::json::object()), ramanforge::ConfigurationError);
}
