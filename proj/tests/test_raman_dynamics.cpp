#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ramanforge/conversion_methods.hpp"
#include "ramanforge/errors.hpp"
#include "ramanforge/raman_dynamics.hpp"
#include "ramanforge/spectrum.hpp"

namespace dy = ramanforge::dynamics;
namespace sp = ramanforge::spectrum;
namespace cv = ramanforge::conversion;

namespace {

constexpr double kPi = std::numbers::pi;

// Two equal tones separated by the qubit splitting: a pure Raman drive.
dy::ThreeLevelParams two_tone(double wq, double detuning, double scale) {
    sp::SidebandSpectrum s(1, wq, scale);
    s.set_amplitude(0, std::sqrt(0.5));
    s.set_amplitude(1, std::sqrt(0.5));
    dy::ThreeLevelParams p;
    p.qubit_frequency = wq;
    p.detuning = detuning;
    p.spectrum = s;
    return p;
}

dy::ThreeLevelParams dispersive_drive(double ratio) {
    dy::ThreeLevelParams p;
    p.qubit_frequency = 0.1;
    p.detuning = ratio;
    p.spectrum = sp::apply_quadratic_phase(sp::phase_modulate(1.336, 0.1, 40), 0.76);
    return p;
}

}  // namespace

TEST(RamanRabiFrequency, TwoToneFormula) {
    const auto p = two_tone(1.0, 500.0, 4.0);
    EXPECT_NEAR(dy::raman_rabi_frequency(p), 4.0 / (2.0 * 500.0) * 0.5, 1e-15);
    auto zero = p;
    zero.detuning = 0.0;
    EXPECT_THROW(dy::raman_rabi_frequency(zero), ramanforge::SingularityError);
}

TEST(RamanRabiFrequency, ScalesWithAmEfficiency) {
    const auto p = dispersive_drive(100.0);
    const double eta = sp::am_efficiency(p.spectrum, 1);
    EXPECT_NEAR(dy::raman_rabi_frequency(p), 1.0 / 200.0 * eta, 1e-14);
}

TEST(Validation, SpacingAndReductionGuards) {
    auto p = two_tone(1.0, 500.0, 1.0);
    p.qubit_frequency = 1.1;
    EXPECT_THROW(dy::validate_spacing(p), ramanforge::ConfigurationError);
    p = two_tone(1.0, 5.0, 1.0);
    EXPECT_THROW(dy::validate_tls_reduction(p), ramanforge::ConfigurationError);
    p.harmonic = 0;
    EXPECT_THROW(dy::validate_spacing(p), ramanforge::ConfigurationError);
    auto q = two_tone(1.0, 500.0, 1.0);
    EXPECT_NO_THROW(dy::validate_tls_reduction(q));
}

TEST(DriveTable, InterpolatesFieldBetweenSamples) {
    const auto s = sp::apply_quadratic_phase(sp::phase_modulate(1.3, 2.0, 40), 0.76);
    const dy::DriveTable table(s);
    std::vector<double> times;
    for (int j = 0; j < 200; ++j) times.push_back(0.01237 * j + 3.3);
    const auto exact = sp::field_waveform(s, times);
    for (std::size_t j = 0; j < times.size(); ++j) EXPECT_LT(std::abs(table(times[j]) - exact[j]), 1e-9) << j;
    EXPECT_NEAR(table.period(), kPi, 1e-15);
}

TEST(EvolveTls, TwoToneRabiFlop) {
    const auto p = two_tone(1.0, 2000.0, 100.0);
    const double rabi = dy::raman_rabi_frequency(p);
    const double duration = kPi / rabi;
    const auto tr = dy::evolve_tls(p, duration, dy::QubitState(1.0, 0.0));
    EXPECT_NEAR(tr.populations.back()[1], 1.0, 2e-3);
    EXPECT_LT(tr.max_norm_drift, 1e-9);
    const auto p1 = tr.population(1);
    const std::size_t mid = p1.size() / 2;
    EXPECT_NEAR(p1[mid], 0.5, 5e-3);
}

TEST(EvolveThreeLevel, UndrivenExcitedStateDecays) {
    dy::ThreeLevelParams p;
    p.qubit_frequency = 1.0;
    p.detuning = 3.0;
    p.excited_linewidth = 0.4;
    dy::EvolveOptions o;
    o.samples = 51;
    const auto tr = dy::evolve_three_level(p, 5.0, dy::AtomState(0.0, 0.0, 1.0), o);
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
        EXPECT_NEAR(tr.populations[j][2], std::exp(-0.4 * tr.times[j]), 1e-9) << j;
    }
}

TEST(EvolveThreeLevel, MatchesTwoLevelModelWhenFarDetuned) {
    const auto p = dispersive_drive(100.0);
    const double period = 2.0 * kPi / dy::raman_rabi_frequency(p);
    const auto a = dy::evolve_tls(p, period, dy::QubitState(1.0, 0.0));
    const auto b = dy::evolve_three_level(p, period, dy::AtomState(1.0, 0.0, 0.0));
    EXPECT_LE(dy::max_population_deviation(a, b), 0.02);
    EXPECT_LT(b.max_norm_drift, 1e-8);
}

TEST(EvolveThreeLevel, RejectsBadInput) {
    const auto p = dispersive_drive(100.0);
    EXPECT_THROW(dy::evolve_three_level(p, 0.0, dy::AtomState(1.0, 0.0, 0.0)), ramanforge::ConfigurationError);
    EXPECT_THROW(dy::evolve_three_level(p, 1.0, dy::AtomState(1.0, 1.0, 0.0)), ramanforge::ConfigurationError);
    EXPECT_THROW(dy::evolve_tls(p, 1.0, dy::QubitState(0.0, 0.0)), ramanforge::ConfigurationError);
}

TEST(ScatteringFigures, FormulaAndTradeoff) {
    auto p = two_tone(1.0, 1000.0, 100.0);
    p.excited_linewidth = 0.01;
    const auto f = dy::scattering_figures(p);
    EXPECT_NEAR(f.gamma_sc, 0.01 * 100.0 / (4.0 * 1e6), 1e-18);
    EXPECT_NEAR(f.pi_pulses_per_scatter, (f.rabi_frequency / kPi) / f.gamma_sc, 1e-9);
    auto far = p;
    far.detuning *= 2.0;
    far.spectrum = far.spectrum.with_power_scale(200.0);
    EXPECT_NEAR(dy::raman_rabi_frequency(far), f.rabi_frequency, 1e-15);
    EXPECT_NEAR(dy::scattering_figures(far).pi_pulses_per_scatter, 2.0 * f.pi_pulses_per_scatter, 1e-6);
    p.excited_linewidth = 0.0;
    EXPECT_THROW(dy::scattering_figures(p), ramanforge::DomainError);
}

TEST(MeasureTlsRabi, DispersiveOperatingPointWithinOnePercent) {
    const double wq = 2.0 * kPi * 6.8e9, detuning = 2.0 * kPi * 3e12, target = 2.0 * kPi * 2e6;
    const cv::ConversionMethod m = cv::Dispersive{0.76};
    const auto spec = cv::method_output_spectrum(m, 1.336, wq).normalized();
    dy::ThreeLevelParams p;
    p.qubit_frequency = wq;
    p.detuning = detuning;
    p.spectrum = spec.with_power_scale(2.0 * detuning * target / sp::am_efficiency(spec, 1));
    const auto r = dy::measure_tls_rabi(p, 3.0);
    EXPECT_NEAR(r.predicted, target, 1e-6 * target);
    EXPECT_NEAR(r.frequency / r.predicted, 1.0, 0.01);
}

TEST(TrajectoryCsv, HeaderAndRows) {
    const auto p = two_tone(1.0, 2000.0, 400.0);
    dy::EvolveOptions o;
    o.samples = 5;
    const auto tr = dy::evolve_tls(p, 1.0, dy::QubitState(1.0, 0.0), o);
    std::ostringstream out;
    dy::write_trajectory_csv(tr, out);
    const std::string text = out.str();
    EXPECT_EQ(text.rfind("t,p0,p1,p2,re_coh,im_coh\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
    EXPECT_EQ(text.find('\r'), std::string::npos);
}
