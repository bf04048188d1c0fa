#pragma once

// Laser fields as uniformly spaced sideband spectra.
//
// A field Omega(t) = Omega_0 sum_n a_n exp(i n w t) is stored densely over
// n in [-n_max, n_max]. Amplitudes are dimensionless (relative to Omega_0);
// |Omega_0|^2 is kept separately as carrier_power_scale. Every operation
// returns a new spectrum.

#include <complex>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ramanforge::spectrum {

using cplx = std::complex<double>;

class SidebandSpectrum {
public:
    SidebandSpectrum(int n_max, double mod_frequency, double carrier_power_scale = 1.0);

    int n_max() const noexcept { return n_max_; }
    double mod_frequency() const noexcept { return mod_frequency_; }
    double carrier_power_scale() const noexcept { return carrier_power_scale_; }

    // Zero outside [-n_max, n_max].
    cplx amplitude(int n) const noexcept;
    void set_amplitude(int n, cplx value);

    // Dense storage, index n + n_max.
    std::span<const cplx> dense() const noexcept { return amps_; }

    double total_power() const noexcept;

    // Largest |n| whose component carries more than power_floor of the power.
    int significant_extent(double power_floor = 1e-12) const noexcept;

    SidebandSpectrum with_power_scale(double scale) const;
    SidebandSpectrum with_global_phase(double theta) const;
    // Rescale amplitudes to unit total power, moving the power into carrier_power_scale.
    SidebandSpectrum normalized() const;

private:
    int n_max_;
    double mod_frequency_;
    double carrier_power_scale_;
    std::vector<cplx> amps_;
};

struct RemoveCarrier {};
struct RemoveOddSidebands {};
struct KeepIndices {
    std::set<int> indices;  // must be non-empty
};
using FilterKind = std::variant<RemoveCarrier, RemoveOddSidebands, KeepIndices>;

// a_n = J_n(beta) for |n| <= trunc. beta in [0, 2pi], trunc >= ceil(beta) + 20.
SidebandSpectrum phase_modulate(double beta, double mod_frequency, int trunc);

// a_n -> a_n exp(i alpha n^2)
SidebandSpectrum apply_quadratic_phase(const SidebandSpectrum& spec, double alpha);

// Zeroes the removed components. Throws DegenerateInputError if no power remains.
SidebandSpectrum apply_filter(const SidebandSpectrum& spec, const FilterKind& filter);

// sum_n conj(a_n) a_{n+k}: the k-th harmonic of the intensity in units of |Omega_0|^2.
cplx lag_overlap(const SidebandSpectrum& spec, int k);

// |sum_n conj(a_n) a_{n+k}| / sum_n |a_n|^2, k >= 1.
double am_efficiency(const SidebandSpectrum& spec, int k);

// Omega(t) / Omega_0 on the given times (carrier_power_scale not applied).
std::vector<cplx> field_waveform(const SidebandSpectrum& spec, std::span<const double> times);

// |Omega(t)|^2 = carrier_power_scale * |sum_n a_n exp(i n w t)|^2.
std::vector<double> intensity_waveform(const SidebandSpectrum& spec, std::span<const double> times);

// Uniform grid over one modulation period 2pi/w, endpoint excluded.
std::vector<double> beat_period_grid(const SidebandSpectrum& spec, std::size_t samples = 4096);

nlohmann::json to_json(const SidebandSpectrum& spec);
SidebandSpectrum spectrum_from_json(const nlohmann::json& doc);

}  // namespace ramanforge::spectrum
