#pragma once

// Driven Lambda system: two ground states |0>, |1> split by w_q, one excited
// state |2> at detuning Delta, coupled by a multi-frequency field
// Omega(t) = Omega_0 sum_n a_n exp(i n w t). Provides the Raman Rabi frequency,
// full three-level integration, the adiabatically eliminated two-level model,
// and the scattering tradeoff.

#include <array>
#include <complex>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ramanforge/spectrum.hpp"

namespace ramanforge::dynamics {

using cplx = std::complex<double>;
using QubitState = Eigen::Vector2cd;
using AtomState = Eigen::Vector3cd;

struct ThreeLevelParams {
    double qubit_frequency = 0.0;     // rad/s
    double detuning = 0.0;            // rad/s
    spectrum::SidebandSpectrum spectrum{0, 0.0};
    double excited_linewidth = 0.0;   // rad/s, >= 0
    int harmonic = 1;                 // spectrum spacing is qubit_frequency / harmonic
};

// Throws ConfigurationError unless harmonic >= 1 and
// harmonic * mod_frequency equals qubit_frequency to 1e-9 relative.
void validate_spacing(const ThreeLevelParams& params);

// Throws ConfigurationError unless |Delta| >= 10 * extent * w, where extent is
// the largest index carrying more than 1e-12 of the power.
void validate_tls_reduction(const ThreeLevelParams& params);

// |Omega_0|^2 / (2 |Delta|) * |sum_n conj(a_n) a_{n+k}|.
double raman_rabi_frequency(const ThreeLevelParams& params);

// arg(sum_n conj(a_n) a_{n+k}), the relative phase of the Raman drive.
double raman_drive_phase(const ThreeLevelParams& params);

// Omega(t) / Omega_0 on one modulation period, tabulated with its time
// derivative and read back by cubic Hermite interpolation.
class DriveTable {
public:
    explicit DriveTable(const spectrum::SidebandSpectrum& spec, std::size_t samples = 0);

    cplx operator()(double t) const noexcept;
    double period() const noexcept { return period_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    double period_;
    double inv_dt_;
    double dt_;
    std::vector<cplx> values_;
    std::vector<cplx> slopes_;
};

struct StateTrajectory {
    std::vector<double> times;
    std::vector<std::array<double, 3>> populations;  // p0, p1, p2
    std::vector<cplx> coherences;                     // c0 * conj(c1), qubit rotating frame
    double max_norm_drift = 0.0;                      // max |p0 + p1 + p2 - 1|

    std::vector<double> population(int level) const;
};

struct EvolveOptions {
    std::size_t samples = 2001;
    double rtol = 1e-11;
    double atol = 1e-13;
};

// Effective two-level evolution with coupling Omega_TLS(t) = |Omega(t)|^2 / (2 Delta),
// in the frame rotating at w_q. Requires validate_tls_reduction.
StateTrajectory evolve_tls(const ThreeLevelParams& params, double duration, const QubitState& initial,
                           const EvolveOptions& options = {});

// Full three-level evolution. Ground amplitudes are reported in the frame
// rotating at w_q; the excited state carries its bare detuning Delta and,
// when the linewidth is positive, a decay term -i Gamma / 2.
StateTrajectory evolve_three_level(const ThreeLevelParams& params, double duration,
                                   const AtomState& initial, const EvolveOptions& options = {});

// Maximum over samples of |p1_a(t) - p1_b(t)|; the trajectories must share times.
double max_population_deviation(const StateTrajectory& a, const StateTrajectory& b, int level = 1);

struct ScatteringFigures {
    double gamma_sc = 0.0;               // 1/s
    double rabi_frequency = 0.0;         // rad/s
    double pi_pulses_per_scatter = 0.0;
};

// gamma_sc = Gamma <|Omega|^2> / (4 Delta^2), pulses = (Omega_eff / pi) / gamma_sc.
ScatteringFigures scattering_figures(const ThreeLevelParams& params);

struct RabiMeasurement {
    double frequency = 0.0;  // rad/s, from a damped-cosine fit of p1(t)
    double frequency_uncertainty = 0.0;
    double predicted = 0.0;  // raman_rabi_frequency
    StateTrajectory trajectory;
};

// Evolves the two-level model from |0> over the given number of predicted Rabi
// periods and fits the population oscillation.
RabiMeasurement measure_tls_rabi(const ThreeLevelParams& params, double periods = 3.0,
                                 const EvolveOptions& options = {});

// CSV with header t,p0,p1,p2,re_coh,im_coh.
void write_trajectory_csv(const StateTrajectory& trajectory, std::ostream& out);

}  // namespace ramanforge::dynamics
