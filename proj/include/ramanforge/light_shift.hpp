#pragma once

// Vector light shift of an off-resonant beam expressed as a fictitious
// magnetic field B ~ Im[conj(eps) x eps] |E|^2 [1/(w_D2 - w) - 1/(w_D1 - w)],
// and the spin transitions such a field can drive.

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace ramanforge::lightshift {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

// Overall prefactor of the fictitious field in internal units. Physical
// conversions multiply magnitude_scale by the dipole matrix-element factor.
inline constexpr double kFieldScale = 1.0;

class PolarizationVector {
public:
    // Normalizes the Jones vector; throws ConfigurationError for a zero or non-finite vector.
    explicit PolarizationVector(const CVec3& jones);

    const CVec3& jones() const noexcept { return jones_; }
    PolarizationVector conjugate() const;
    PolarizationVector with_global_phase(double theta) const;

    // Named polarizations: sigma_plus_z = (x + i y)/sqrt2, sigma_minus_z,
    // sigma_plus_x = (y + i z)/sqrt2, linear_x, linear_y, linear_z.
    static PolarizationVector named(const std::string& name);

private:
    CVec3 jones_;
};

struct FictitiousField {
    Vec3 direction = Vec3::Zero();  // unit vector or zero
    double magnitude_scale = 0.0;   // kFieldScale * intensity * |Im[conj(eps) x eps]| * detuning_factor
    double detuning_factor = 0.0;   // 1/(d2 - w) - 1/(d1 - w), s/rad
};

// Im[conj(eps) x eps]
Vec3 helicity_vector(const PolarizationVector& eps);

// Throws SingularityError when omega coincides with d1 or d2 (unless d1 == d2,
// where the bracket vanishes identically away from the line).
double detuning_interference(double omega, double d1, double d2);

FictitiousField fictitious_field(const PolarizationVector& eps, double intensity, double laser_freq, double d1,
                                 double d2);

enum class TransitionClass { Pi, Sigma, Mixed, None };

std::string class_name(TransitionClass c);

// Angle tolerance for the parallel and perpendicular tests, in radians.
inline constexpr double kAngleTolerance = 1e-6;

// Throws ConfigurationError if the axis is not a unit vector.
TransitionClass transition_class(const FictitiousField& field, const Vec3& quantization_axis);

}  // namespace ramanforge::lightshift
