#pragma once

// Qubit pulse sequences built from instantaneous rotations and free
// evolution, simulated shot by shot under per-pulse scattering, quasi-static
// detuning, amplitude miscalibration and idle population decay.
//
// Conventions: a pulse with axis phase phi and angle theta is
// R = cos(theta/2) I - i sin(theta/2) (cos phi sigma_x + sin phi sigma_y);
// free evolution for time t under detuning delta is exp(-i delta t sigma_z / 2).
// Every sequence starts in |0> and the reported signal is the |0> population.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ramanforge/fitting.hpp"

namespace ramanforge::sequences {

struct Pulse {
    double axis_phase = 0.0;  // rad
    double angle = 0.0;       // rad, in (0, 2pi]
    double duration = 0.0;    // s, > 0
};

struct FreeEvolution {
    double duration = 0.0;  // s, > 0
};

using Element = std::variant<Pulse, FreeEvolution>;

struct PulseSequence {
    std::vector<Element> elements;
    std::string label;

    double total_duration() const;
    double idle_duration() const;
    int pulse_count() const;
    // Sum of pulse angles in units of pi.
    double pi_dose() const;
};

enum class Closer { PlusX, MinusX };

struct Rabi {
    double duration = 0.0;
};
struct Ramsey {
    double gap = 0.0;
    double final_phase = 0.0;
};
// (pi/2)_x [gap/2 pi_y gap/2]^n (pi/2)_{+-x}. MinusX composes to the identity, PlusX to a flip.
struct Cpmg {
    int n = 1;
    double gap = 0.0;
    Closer closer = Closer::MinusX;
};
// (pi/2)_x, n_repeats blocks of XY8 followed by its phase-inverted copy, each
// pi pulse centered in its gap, then (pi/2)_{+-x}.
struct Xy16 {
    int n_repeats = 1;
    double gap = 0.0;
    Closer closer = Closer::MinusX;
};
// Same frame as Cpmg but every pi pulse about x.
struct PlainTrain {
    int n = 1;
    double gap = 0.0;
    Closer closer = Closer::MinusX;
};

using SequenceKind = std::variant<Rabi, Ramsey, Cpmg, Xy16, PlainTrain>;

// Throws ConfigurationError for n < 1, negative gaps, non-positive durations or pi_time.
PulseSequence build_sequence(const SequenceKind& kind, double pi_time);

struct DeltaDetuning {
    double value = 0.0;  // rad/s
};
struct GaussianDetuning {
    double mean = 0.0;
    double sigma = 0.0;
};
struct ExponentialDetuning {
    double mean = 0.0;  // rad/s, draws are mean * Exp(1)
};
using DetuningDistribution = std::variant<DeltaDetuning, GaussianDetuning, ExponentialDetuning>;

struct NoiseModel {
    double scatter_prob = 0.0;  // per pi of rotation angle, in [0, 1)
    DetuningDistribution detuning = DeltaDetuning{};
    double amplitude_error = 0.0;  // fractional, every angle is scaled by (1 + error)
    double idle_t1 = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

// Throws ConfigurationError for out-of-range noise parameters.
void validate(const NoiseModel& noise);

// Quantile of the detuning distribution at u in (0, 1).
double detuning_quantile(const DetuningDistribution& dist, double u);

// |0> population after the sequence for a fixed detuning with no decay.
double coherent_signal(const PulseSequence& seq, double detuning, double amplitude_error);

struct PointResult {
    double signal = 0.0;
    double std_error = 0.0;
    long shots = 0;
};

// Monte-Carlo over shots. A shot draws a detuning, and is depolarized (signal
// 1/2) with probability 1 - (1 - p)^dose, or by an idle decay event with
// probability 1 - exp(-T_idle / t1). Undisturbed shots contribute their exact
// |0> population. Detuning and event uniforms are stratified across shots.
// stream separates independent scan points that share one seed.
PointResult simulate_sequence(const PulseSequence& seq, const NoiseModel& noise, long shots,
                              std::uint64_t stream = 0);

struct SequenceResult {
    std::string label;
    std::vector<double> scan_values;
    std::vector<double> signal;
    std::vector<double> std_error;
    long shots = 0;
    std::uint64_t seed = 0;
    std::optional<fitting::FitResult> fit;
};

using SequenceFactory = std::function<PulseSequence(double scan_value)>;

// Simulates factory(v) for every scan value; point i uses stream i.
SequenceResult scan_sequences(const std::string& label, std::span<const double> scan_values,
                              const SequenceFactory& factory, const NoiseModel& noise, long shots);

struct CpmgScan {
    SequenceResult plus_x;
    SequenceResult minus_x;
    SequenceResult difference;  // minus_x - plus_x
};

// Both closers share random numbers per point, so their difference isolates the decay.
CpmgScan cpmg_scan(std::span<const int> pulse_counts, double gap, double pi_time, const NoiseModel& noise,
                   long shots);

// Contrast sqrt(X^2 + Y^2) from four Ramsey closer phases evaluated with common
// random numbers; X and Y are the cosine and sine quadratures.
SequenceResult ramsey_contrast(const NoiseModel& noise, std::span<const double> gaps, long shots,
                               double pi_time = 1e-7);

// Attaches a fit of signal against scan value.
SequenceResult fit_result(SequenceResult result, fitting::DecayModel model);

}  // namespace ramanforge::sequences
