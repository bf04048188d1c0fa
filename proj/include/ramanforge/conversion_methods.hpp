#pragma once

// Phase-to-amplitude modulation conversion schemes: closed-form transmission,
// amplitude-modulation efficiency and coherence metric C = T * eta^2, a
// spectrum-level route for the same numbers, operating-point optimizers, and
// the dispersive-element requirement analysis.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ramanforge/spectrum.hpp"

namespace ramanforge::conversion {

struct FilterCarrier {};
struct FilterMachZehnderInterferometer {};
struct MZModulatorHalfTransmission {};
struct MZModulatorMinTransmission {};
struct Dispersive {
    double alpha;  // phase curvature per sideband index squared, in (0, pi)
};

using ConversionMethod =
    std::variant<FilterCarrier, FilterMachZehnderInterferometer, MZModulatorHalfTransmission,
                 MZModulatorMinTransmission, Dispersive>;

// Validates alpha in (0, pi).
ConversionMethod dispersive(double alpha);

// Short identifiers used in CSV output: filter_carrier, filter_mzi, mzm_half, mzm_min, dispersive.
std::string method_name(const ConversionMethod& method);

// Harmonic of the modulation frequency that drives the qubit (w = w_q / k).
int method_harmonic(const ConversionMethod& method);

// The four interferometric schemes plus the dispersive one at alpha = 0.76 rad.
std::vector<ConversionMethod> table_methods();

struct MethodReport {
    double transmission = 0.0;
    double am_eff = 0.0;
    double coherence = 0.0;  // transmission * am_eff^2
    double beta = 0.0;
    std::optional<double> alpha;
};

MethodReport make_report(double transmission, double am_eff, double beta,
                         std::optional<double> alpha = std::nullopt);

// Closed forms. beta in [0, 2pi]; beta = 0 throws DegenerateInputError for the
// carrier filter and the min-transmission modulator (0/0 efficiency).
MethodReport method_metrics(const ConversionMethod& method, double beta);

// Field spectrum leaving the conversion stage for unit input power, spaced by
// qubit_frequency / method_harmonic(method). The Mach-Zehnder modulators are
// represented by their output field (1 - e^{i phi(t)}) / 2.
spectrum::SidebandSpectrum method_output_spectrum(const ConversionMethod& method, double beta,
                                                  double qubit_frequency);

// Same numbers as method_metrics, measured on method_output_spectrum.
MethodReport method_metrics_numeric(const ConversionMethod& method, double beta);

struct Optimum {
    double beta_star = 0.0;
    MethodReport report;
};

// Maximizes C over (0, beta_max]: 1e-3 scan plus golden-section refinement to 1e-6.
Optimum optimize_beta(const ConversionMethod& method, double beta_max = 3.141592653589793);

struct JointDispersiveOptimum {
    double beta = 0.0;
    double alpha = 0.0;
    double argument = 0.0;  // 2 beta sin(alpha)
    MethodReport report;
};

// Maximizes C over beta in (0, beta_max] and alpha in (0, pi) together.
JointDispersiveOptimum optimize_dispersive_joint(double beta_max = 3.141592653589793);

struct DispersiveElement {
    DispersiveElement(double gdd_fs2, double bandwidth_rad_s, double center_offset_rad_s,
                      std::string label);

    double gdd_fs2;
    double bandwidth;      // rad/s, full width of the reflection band
    double center_offset;  // rad/s, laser frequency minus band center
    std::string label;
};

struct WrappedAlpha {
    double alpha = 0.0;  // in [0, pi)
    long wraps = 0;      // floor(unwrapped / pi)
    double unwrapped = 0.0;
};

// alpha = reflections * GDD * w_q^2 / 2 with GDD converted from fs^2 to s^2.
WrappedAlpha alpha_from_gdd(const DispersiveElement& element, double qubit_frequency,
                            int reflections);

// First maximum of J_1, located numerically (1.8412...).
double j1_first_maximum();

// beta such that 2 beta |sin alpha| hits the first J_1 maximum.
double required_beta_for_optimum(double alpha);

// Reflection from an ideal uniform-GDD element: components outside the band
// are dropped, the rest pick up exp(i alpha n^2) per reflection.
spectrum::SidebandSpectrum reflect_from_element(const spectrum::SidebandSpectrum& spec,
                                                const DispersiveElement& element,
                                                int reflections);

struct DispersiveSetup {
    DispersiveElement element;
    int reflections = 1;
};

struct Fig1eRow {
    std::string label;
    double gdd_fs2 = 0.0;  // total over all reflections
    double alpha = 0.0;    // wrapped into [0, pi)
    double required_beta = 0.0;
    bool reachable = false;  // required_beta <= pi
};

std::vector<Fig1eRow> fig1e_dataset(const std::vector<DispersiveSetup>& setups,
                                    double qubit_frequency);

// CBG single and double bounce, 10 m fiber, 1300 fs^2 chirped mirror.
std::vector<DispersiveSetup> default_dispersive_setups();

enum class SidebandLayout { Uniform, Optimal };

// Upper bounds on eta for N comb lines: (N-1)/N uniform, cos(pi/(N+1)) optimal.
double n_sideband_bound(int n, SidebandLayout layout);

struct SweepRow {
    std::string method;
    MethodReport report;
};

std::vector<SweepRow> method_sweep(const std::vector<ConversionMethod>& methods,
                                   const std::vector<double>& betas);

}  // namespace ramanforge::conversion
