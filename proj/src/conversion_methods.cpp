#include "ramanforge/conversion_methods.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ramanforge/errors.hpp"
#include "ramanforge/optimize.hpp"
#include "ramanforge/special_functions.hpp"

namespace ramanforge::conversion {

namespace {

using special::bessel_j;
using spectrum::SidebandSpectrum;

constexpr double kPi = std::numbers::pi;
constexpr double kScanStep = 1e-3;
constexpr double kRefineTol = 1e-6;
constexpr double kFs2ToS2 = 1e-30;
constexpr double kReferenceQubitFrequency = 1.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_beta(double beta, const char* op) {
    if (!(beta >= 0.0 && beta <= 2.0 * kPi)) {
        throw DomainError(std::string(op) + ": beta outside [0, 2pi]");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < kPi)) throw DomainError("dispersive: alpha outside (0, pi)");
}

std::optional<double> alpha_of(const ConversionMethod& method) {
    if (const auto* d = std::get_if<Dispersive>(&method)) return d->alpha;
    return std::nullopt;
}

}  // namespace

ConversionMethod dispersive(double alpha) {
    check_alpha(alpha);
    return Dispersive{alpha};
}

std::string method_name(const ConversionMethod& method) {
    return std::visit(overloaded{
                          [](const FilterCarrier&) { return std::string("filter_carrier"); },
                          [](const FilterMachZehnderInterferometer&) { return std::string("filter_mzi"); },
                          [](const MZModulatorHalfTransmission&) { return std::string("mzm_half"); },
                          [](const MZModulatorMinTransmission&) { return std::string("mzm_min"); },
                          [](const Dispersive&) { return std::string("dispersive"); },
                      },
                      method);
}

int method_harmonic(const ConversionMethod& method) {
    return std::visit(overloaded{
                          [](const FilterCarrier&) { return 2; },
                          [](const FilterMachZehnderInterferometer&) { return 2; },
                          [](const MZModulatorHalfTransmission&) { return 1; },
                          [](const MZModulatorMinTransmission&) { return 2; },
                          [](const Dispersive&) { return 1; },
                      },
                      method);
}

std::vector<ConversionMethod> table_methods() {
    return {FilterCarrier{}, FilterMachZehnderInterferometer{}, MZModulatorHalfTransmission{},
            MZModulatorMinTransmission{}, Dispersive{0.76}};
}

MethodReport make_report(double transmission, double am_eff, double beta, std::optional<double> alpha) {
    MethodReport r;
    r.transmission = transmission;
    r.am_eff = am_eff;
    r.coherence = transmission * am_eff * am_eff;
    r.beta = beta;
    r.alpha = alpha;
    return r;
}

MethodReport method_metrics(const ConversionMethod& method, double beta) {
    check_beta(beta, "method_metrics");
    return std::visit(
        overloaded{
            [beta](const FilterCarrier&) {
                const double j0 = bessel_j(0, beta);
                const double t = (1.0 - j0) * (1.0 + j0);
                if (!(t > 0.0)) {
                    throw DegenerateInputError("filter_carrier: no power outside the carrier at this beta");
                }
                return make_report(t, std::abs(2.0 * j0 * bessel_j(2, beta)) / t, beta);
            },
            [beta](const FilterMachZehnderInterferometer&) {
                const double j0 = bessel_j(0, 2.0 * beta);
                const double t = 0.5 * (1.0 + j0);
                return make_report(t, std::abs(bessel_j(2, 2.0 * beta)) / (1.0 + j0), beta);
            },
            [beta](const MZModulatorHalfTransmission&) {
                return make_report(0.5, std::abs(bessel_j(1, beta)), beta);
            },
            [beta](const MZModulatorMinTransmission&) {
                const double one_minus = 1.0 - bessel_j(0, beta);
                if (!(one_minus > 0.0)) {
                    throw DegenerateInputError("mzm_min: zero transmission at this beta");
                }
                return make_report(0.5 * one_minus, std::abs(bessel_j(2, beta)) / one_minus, beta);
            },
            [beta](const Dispersive& d) {
                check_alpha(d.alpha);
                return make_report(1.0, std::abs(bessel_j(1, 2.0 * beta * std::sin(d.alpha))), beta,
                                   d.alpha);
            },
        },
        method);
}

SidebandSpectrum method_output_spectrum(const ConversionMethod& method, double beta,
                                        double qubit_frequency) {
    check_beta(beta, "method_output_spectrum");
    if (!(qubit_frequency > 0.0)) throw DomainError("method_output_spectrum: qubit frequency must be > 0");
    const int k = method_harmonic(method);
    const double w = qubit_frequency / k;
    const int trunc = special::default_truncation(beta);
    const SidebandSpectrum pm = spectrum::phase_modulate(beta, w, trunc);
    return std::visit(
        overloaded{
            [&](const FilterCarrier&) { return spectrum::apply_filter(pm, spectrum::RemoveCarrier{}); },
            [&](const FilterMachZehnderInterferometer&) {
                return spectrum::apply_filter(pm, spectrum::RemoveOddSidebands{});
            },
            [&](const MZModulatorHalfTransmission&) {
                // Bias at quadrature: phi(t) = pi/2 + beta sin(w t).
                SidebandSpectrum out(trunc, w);
                const spectrum::cplx minus_half_i{0.0, -0.5};
                for (int n = -trunc; n <= trunc; ++n) out.set_amplitude(n, minus_half_i * pm.amplitude(n));
                out.set_amplitude(0, 0.5 + minus_half_i * pm.amplitude(0));
                return out;
            },
            [&](const MZModulatorMinTransmission&) {
                // Bias at the dark fringe: phi(t) = beta sin(w t).
                SidebandSpectrum out(trunc, w);
                for (int n = -trunc; n <= trunc; ++n) out.set_amplitude(n, -0.5 * pm.amplitude(n));
                out.set_amplitude(0, 0.5 - 0.5 * pm.amplitude(0));
                if (!(out.total_power() > 0.0)) {
                    throw DegenerateInputError("mzm_min: zero transmission at this beta");
                }
                return out;
            },
            [&](const Dispersive& d) {
                check_alpha(d.alpha);
                return spectrum::apply_quadratic_phase(pm, d.alpha);
            },
        },
        method);
}

MethodReport method_metrics_numeric(const ConversionMethod& method, double beta) {
    check_beta(beta, "method_metrics_numeric");
    const int trunc = special::default_truncation(beta);
    const double input_power = spectrum::phase_modulate(beta, 1.0, trunc).total_power();
    const SidebandSpectrum out = method_output_spectrum(method, beta, kReferenceQubitFrequency);
    const double t = out.total_power() / input_power;
    return make_report(t, spectrum::am_efficiency(out, method_harmonic(method)), beta, alpha_of(method));
}

Optimum optimize_beta(const ConversionMethod& method, double beta_max) {
    if (!(beta_max > 0.0 && beta_max <= 2.0 * kPi)) {
        throw DomainError("optimize_beta: beta_max outside (0, 2pi]");
    }
    auto objective = [&](double beta) {
        try {
            return method_metrics(method, beta).coherence;
        } catch (const DegenerateInputError&) {
            return 0.0;
        }
    };
    const double lo = std::min(kScanStep, beta_max);
    const auto best = optimize::scan_and_refine(objective, lo, beta_max, kScanStep, kRefineTol);
    return {best.x, method_metrics(method, best.x)};
}

JointDispersiveOptimum optimize_dispersive_joint(double beta_max) {
    if (!(beta_max > 0.0 && beta_max <= 2.0 * kPi)) {
        throw DomainError("optimize_dispersive_joint: beta_max outside (0, 2pi]");
    }
    constexpr double kAlphaStep = 1e-2;
    auto best_over_beta = [beta_max](double alpha) {
        auto objective = [alpha](double beta) {
            return method_metrics(Dispersive{alpha}, beta).coherence;
        };
        return optimize::scan_and_refine(objective, kScanStep, beta_max, kScanStep, kRefineTol);
    };
    auto over_alpha = [&](double alpha) { return best_over_beta(alpha).value; };
    const auto best_alpha =
        optimize::scan_and_refine(over_alpha, kAlphaStep, kPi - kAlphaStep, kAlphaStep, kRefineTol);
    const auto best_beta = best_over_beta(best_alpha.x);

    JointDispersiveOptimum out;
    out.alpha = best_alpha.x;
    out.beta = best_beta.x;
    out.argument = 2.0 * out.beta * std::sin(out.alpha);
    out.report = method_metrics(Dispersive{out.alpha}, out.beta);
    return out;
}

DispersiveElement::DispersiveElement(double gdd_fs2_, double bandwidth_rad_s,
                                     double center_offset_rad_s, std::string label_)
    : gdd_fs2(gdd_fs2_),
      bandwidth(bandwidth_rad_s),
      center_offset(center_offset_rad_s),
      label(std::move(label_)) {
    if (!(gdd_fs2 != 0.0) || !std::isfinite(gdd_fs2)) {
        throw ConfigurationError("DispersiveElement '" + label + "': GDD must be finite and nonzero");
    }
    if (!(bandwidth > 0.0)) {
        throw ConfigurationError("DispersiveElement '" + label + "': bandwidth must be > 0");
    }
    if (!std::isfinite(center_offset)) {
        throw ConfigurationError("DispersiveElement '" + label + "': center offset must be finite");
    }
}

WrappedAlpha alpha_from_gdd(const DispersiveElement& element, double qubit_frequency, int reflections) {
    if (!(qubit_frequency > 0.0)) throw DomainError("alpha_from_gdd: qubit frequency must be > 0");
    if (reflections < 1) throw ConfigurationError("alpha_from_gdd: reflections must be >= 1");
    WrappedAlpha out;
    out.unwrapped = 0.5 * reflections * element.gdd_fs2 * kFs2ToS2 * qubit_frequency * qubit_frequency;
    const double turns = std::floor(out.unwrapped / kPi);
    out.wraps = static_cast<long>(turns);
    out.alpha = out.unwrapped - turns * kPi;
    if (out.alpha >= kPi) out.alpha = 0.0;
    if (out.alpha < 0.0) out.alpha = 0.0;
    return out;
}

double j1_first_maximum() {
    static const double x = [] {
        double lo = 1.5;
        double hi = 2.5;
        const auto slope = [](double v) { return bessel_j(0, v) - bessel_j(1, v) / v; };
        while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            const double mid = 0.5 * (lo + hi);
            if (slope(mid) > 0.0) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return x;
}

double required_beta_for_optimum(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("required_beta_for_optimum: alpha must be finite");
    const double s = std::abs(std::sin(alpha));
    if (s == 0.0 || std::remainder(alpha, kPi) == 0.0) {
        throw UnreachableOptimumError("required_beta_for_optimum: sin(alpha) = 0, no beta reaches the optimum");
    }
    return j1_first_maximum() / (2.0 * s);
}

SidebandSpectrum reflect_from_element(const SidebandSpectrum& spec, const DispersiveElement& element,
                                      int reflections) {
    if (reflections < 1) throw ConfigurationError("reflect_from_element: reflections must be >= 1");
    const double w = spec.mod_frequency();
    const double alpha = 0.5 * reflections * element.gdd_fs2 * kFs2ToS2 * w * w;
    SidebandSpectrum out = spectrum::apply_quadratic_phase(spec, alpha);
    const double half_band = 0.5 * element.bandwidth;
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        if (std::abs(element.center_offset + n * w) > half_band) out.set_amplitude(n, 0.0);
    }
    if (!(out.total_power() > 0.0)) {
        throw DegenerateInputError("reflect_from_element: no component inside the reflection band");
    }
    return out;
}

std::vector<Fig1eRow> fig1e_dataset(const std::vector<DispersiveSetup>& setups, double qubit_frequency) {
    std::vector<Fig1eRow> rows;
    rows.reserve(setups.size());
    for (const auto& s : setups) {
        const WrappedAlpha a = alpha_from_gdd(s.element, qubit_frequency, s.reflections);
        Fig1eRow row;
        row.label = s.element.label;
        row.gdd_fs2 = s.element.gdd_fs2 * s.reflections;
        row.alpha = a.alpha;
        try {
            row.required_beta = required_beta_for_optimum(a.alpha);
        } catch (const UnreachableOptimumError&) {
            row.required_beta = std::numeric_limits<double>::infinity();
        }
        row.reachable = row.required_beta <= kPi;
        rows.push_back(row);
    }
    return rows;
}

std::vector<DispersiveSetup> default_dispersive_setups() {
    const double wide = 2.0 * kPi * 1e12;
    return {
        {DispersiveElement(4e8, 2.0 * kPi * 50e9, 0.0, "cbg_single"), 1},
        {DispersiveElement(4e8, 2.0 * kPi * 50e9, 0.0, "cbg_double_bounce"), 2},
        {DispersiveElement(4e5, wide, 0.0, "fiber_10m"), 1},
        {DispersiveElement(1300.0, wide, 0.0, "chirped_mirror"), 1},
    };
}

double n_sideband_bound(int n, SidebandLayout layout) {
    if (n < 2) throw DomainError("n_sideband_bound: need at least two comb lines");
    const double nn = static_cast<double>(n);
    return layout == SidebandLayout::Uniform ? (nn - 1.0) / nn : std::cos(kPi / (nn + 1.0));
}

std::vector<SweepRow> method_sweep(const std::vector<ConversionMethod>& methods,
                                   const std::vector<double>& betas) {
    std::vector<SweepRow> rows;
    rows.reserve(methods.size() * betas.size());
    for (const auto& m : methods) {
        for (double beta : betas) {
            MethodReport r;
            try {
                r = method_metrics(m, beta);
            } catch (const DegenerateInputError&) {
                r = make_report(0.0, 0.0, beta, alpha_of(m));
            }
            rows.push_back({method_name(m), r});
        }
    }
    return rows;
}

}  // namespace ramanforge::conversion
