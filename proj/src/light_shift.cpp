#include "ramanforge/light_shift.hpp"

#include <cmath>
#include <numbers>

#include "ramanforge/errors.hpp"

namespace ramanforge::lightshift {

namespace {

constexpr double kZeroHelicity = 1e-12;

}  // namespace

PolarizationVector::PolarizationVector(const CVec3& jones) {
    const double n = jones.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigurationError("PolarizationVector: zero or non-finite Jones vector");
    jones_ = jones / n;
}

PolarizationVector PolarizationVector::conjugate() const { return PolarizationVector(jones_.conjugate()); }

PolarizationVector PolarizationVector::with_global_phase(double theta) const {
    return PolarizationVector(jones_ * std::polar(1.0, theta));
}

PolarizationVector PolarizationVector::named(const std::string& name) {
    using c = std::complex<double>;
    const c i(0.0, 1.0);
    if (name == "sigma_plus_z") return PolarizationVector(CVec3(1.0, i, 0.0));
    if (name == "sigma_minus_z") return PolarizationVector(CVec3(1.0, -i, 0.0));
    if (name == "sigma_plus_x") return PolarizationVector(CVec3(0.0, 1.0, i));
    if (name == "linear_x") return PolarizationVector(CVec3(1.0, 0.0, 0.0));
    if (name == "linear_y") return PolarizationVector(CVec3(0.0, 1.0, 0.0));
    if (name == "linear_z") return PolarizationVector(CVec3(0.0, 0.0, 1.0));
    throw ConfigurationError("unknown polarization '" + name + "'");
}

Vec3 helicity_vector(const PolarizationVector& eps) {
    const CVec3& e = eps.jones();
    const CVec3 a = e.conjugate();
    return Vec3((a.y() * e.z() - a.z() * e.y()).imag(), (a.z() * e.x() - a.x() * e.z()).imag(),
                (a.x() * e.y() - a.y() * e.x()).imag());
}

double detuning_interference(double omega, double d1, double d2) {
    if (d1 == d2) {
        if (omega == d1) throw SingularityError("detuning_interference: laser on resonance");
        return 0.0;
    }
    if (omega == d1 || omega == d2) throw SingularityError("detuning_interference: laser on resonance");
    return 1.0 / (d2 - omega) - 1.0 / (d1 - omega);
}

FictitiousField fictitious_field(const PolarizationVector& eps, double intensity, double laser_freq, double d1,
                                 double d2) {
    FictitiousField f;
    f.detuning_factor = detuning_interference(laser_freq, d1, d2);
    const Vec3 h = helicity_vector(eps);
    const double hn = h.norm();
    if (hn > kZeroHelicity) f.direction = h / hn;
    f.magnitude_scale = kFieldScale * intensity * hn * f.detuning_factor;
    return f;
}

std::string class_name(TransitionClass c) {
    switch (c) {
        case TransitionClass::Pi: return "pi";
        case TransitionClass::Sigma: return "sigma";
        case TransitionClass::Mixed: return "mixed";
        case TransitionClass::None: return "none";
    }
    return "none";
}

TransitionClass transition_class(const FictitiousField& field, const Vec3& axis) {
    if (std::abs(axis.norm() - 1.0) > 1e-9) throw ConfigurationError("transition_class: axis must be a unit vector");
    if (field.direction.norm() == 0.0 || field.magnitude_scale == 0.0) return TransitionClass::None;
    const double angle = std::atan2(field.direction.cross(axis).norm(), std::abs(field.direction.dot(axis)));
    if (angle <= kAngleTolerance) return TransitionClass::Pi;
    if (std::abs(angle - 0.5 * std::numbers::pi) <= kAngleTolerance) return TransitionClass::Sigma;
    return TransitionClass::Mixed;
}

}  // namespace ramanforge::lightshift
