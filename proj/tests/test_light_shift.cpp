#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ramanforge/errors.hpp"
#include "ramanforge/light_shift.hpp"

namespace ls = ramanforge::lightshift;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kD1 = kTwoPi * 377.107463e12;
const double kD2 = kTwoPi * 384.230484e12;
const double kLaser = kD2 - kTwoPi * 93e9;

ls::FictitiousField field_of(const std::string& name) {
    return ls::fictitious_field(ls::PolarizationVector::named(name), 1.0, kLaser, kD1, kD2);
}

}  // namespace

TEST(Polarization, NormalizesAndRejectsZero) {
    const ls::PolarizationVector p(ls::CVec3(3.0, 4.0, 0.0));
    EXPECT_NEAR(p.jones().norm(), 1.0, 1e-15);
    EXPECT_THROW(ls::PolarizationVector(ls::CVec3::Zero()), ramanforge::ConfigurationError);
    EXPECT_THROW(ls::PolarizationVector::named("elliptic_q"), ramanforge::ConfigurationError);
}

TEST(Helicity, CircularAlongZ) {
    const auto h = ls::helicity_vector(ls::PolarizationVector::named("sigma_plus_z"));
    EXPECT_NEAR(h.x(), 0.0, 1e-15);
    EXPECT_NEAR(h.y(), 0.0, 1e-15);
    EXPECT_NEAR(h.z(), 1.0, 1e-15);
    const auto m = ls::helicity_vector(ls::PolarizationVector::named("sigma_minus_z"));
    EXPECT_NEAR(m.z(), -1.0, 1e-15);
}

TEST(Helicity, ConjugationFlipsAndGlobalPhaseKeeps) {
    const ls::PolarizationVector e(ls::CVec3({0.3, 0.1}, {-0.2, 0.7}, {0.5, -0.4}));
    const auto h = ls::helicity_vector(e);
    EXPECT_LT((ls::helicity_vector(e.conjugate()) + h).norm(), 1e-15);
    EXPECT_LT((ls::helicity_vector(e.with_global_phase(1.1)) - h).norm(), 1e-15);
}

TEST(FictitiousField, ThreePolarizationRules) {
    const ls::Vec3 z(0.0, 0.0, 1.0);
    const auto circ_z = field_of("sigma_plus_z");
    EXPECT_EQ(ls::transition_class(circ_z, z), ls::TransitionClass::Pi);
    EXPECT_LT((circ_z.direction - z).norm(), 1e-12);

    for (const char* name : {"linear_x", "linear_y", "linear_z"}) {
        const auto lin = field_of(name);
        EXPECT_LT(std::abs(lin.magnitude_scale), 1e-12) << name;
        EXPECT_EQ(ls::transition_class(lin, z), ls::TransitionClass::None) << name;
    }

    const auto circ_x = field_of("sigma_plus_x");
    EXPECT_EQ(ls::transition_class(circ_x, z), ls::TransitionClass::Sigma);
}

TEST(FictitiousField, TiltedAxisIsMixed) {
    const auto f = field_of("sigma_plus_z");
    const ls::Vec3 tilted = ls::Vec3(0.0, std::sin(0.3), std::cos(0.3));
    EXPECT_EQ(ls::transition_class(f, tilted), ls::TransitionClass::Mixed);
    EXPECT_THROW(ls::transition_class(f, ls::Vec3(0.0, 0.0, 2.0)), ramanforge::ConfigurationError);
}

TEST(DetuningInterference, SignAndCancellation) {
    EXPECT_NEAR(ls::detuning_interference(0.0, 1.0, 2.0), 0.5 - 1.0, 1e-15);
    EXPECT_EQ(ls::detuning_interference(5.0, 3.0, 3.0), 0.0);
    EXPECT_THROW(ls::detuning_interference(2.0, 1.0, 2.0), ramanforge::SingularityError);
    EXPECT_THROW(ls::detuning_interference(3.0, 3.0, 3.0), ramanforge::SingularityError);
}

TEST(FictitiousField, MagnitudeScalesWithIntensity) {
    const auto eps = ls::PolarizationVector::named("sigma_plus_z");
    const auto a = ls::fictitious_field(eps, 1.0, kLaser, kD1, kD2);
    const auto b = ls::fictitious_field(eps, 3.0, kLaser, kD1, kD2);
    EXPECT_NEAR(b.magnitude_scale, 3.0 * a.magnitude_scale, 1e-12 * std::abs(b.magnitude_scale));
    EXPECT_EQ(ls::class_name(ls::TransitionClass::Pi), "pi");
    EXPECT_EQ(ls::class_name(ls::TransitionClass::Sigma), "sigma");
}
