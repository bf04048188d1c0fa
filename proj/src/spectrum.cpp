#include "ramanforge/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ramanforge/errors.hpp"
#include "ramanforge/kernels.hpp"
#include "ramanforge/special_functions.hpp"

namespace ramanforge::spectrum {

namespace {

int checked_n_max(int n_max) {
    if (n_max < 0) throw ConfigurationError("SidebandSpectrum: n_max must be >= 0");
    return n_max;
}

}  // namespace

SidebandSpectrum::SidebandSpectrum(int n_max, double mod_frequency, double carrier_power_scale)
    : n_max_(n_max),
      mod_frequency_(mod_frequency),
      carrier_power_scale_(carrier_power_scale),
      amps_(static_cast<std::size_t>(2 * checked_n_max(n_max) + 1)) {
    if (!(carrier_power_scale > 0.0)) {
        throw ConfigurationError("SidebandSpectrum: carrier_power_scale must be > 0");
    }
}

cplx SidebandSpectrum::amplitude(int n) const noexcept {
    if (n < -n_max_ || n > n_max_) return {0.0, 0.0};
    return amps_[static_cast<std::size_t>(n + n_max_)];
}

void SidebandSpectrum::set_amplitude(int n, cplx value) {
    if (n < -n_max_ || n > n_max_) {
        throw ConfigurationError("SidebandSpectrum: index " + std::to_string(n) +
                                 " outside [-n_max, n_max]");
    }
    amps_[static_cast<std::size_t>(n + n_max_)] = value;
}

double SidebandSpectrum::total_power() const noexcept {
    double p = 0.0;
    for (const auto& a : amps_) p += std::norm(a);
    return p;
}

int SidebandSpectrum::significant_extent(double power_floor) const noexcept {
    const double floor = power_floor * total_power();
    for (int n = n_max_; n > 0; --n) {
        if (std::norm(amplitude(n)) > floor || std::norm(amplitude(-n)) > floor) return n;
    }
    return 0;
}

SidebandSpectrum SidebandSpectrum::with_power_scale(double scale) const {
    SidebandSpectrum out(n_max_, mod_frequency_, scale);
    out.amps_ = amps_;
    return out;
}

SidebandSpectrum SidebandSpectrum::with_global_phase(double theta) const {
    SidebandSpectrum out = *this;
    const cplx rot = std::polar(1.0, theta);
    for (auto& a : out.amps_) a *= rot;
    return out;
}

SidebandSpectrum SidebandSpectrum::normalized() const {
    const double p = total_power();
    if (!(p > 0.0)) throw DegenerateInputError("normalized: spectrum carries no power");
    SidebandSpectrum out(n_max_, mod_frequency_, carrier_power_scale_ * p);
    const double s = 1.0 / std::sqrt(p);
    for (std::size_t i = 0; i < amps_.size(); ++i) out.amps_[i] = amps_[i] * s;
    return out;
}

SidebandSpectrum phase_modulate(double beta, double mod_frequency, int trunc) {
    if (!(beta >= 0.0 && beta <= 2.0 * std::numbers::pi)) {
        throw DomainError("phase_modulate: beta outside [0, 2pi]");
    }
    const int minimum = static_cast<int>(std::ceil(beta)) + 20;
    if (trunc < minimum) {
        throw TruncationError("phase_modulate: trunc " + std::to_string(trunc) +
                              " below required " + std::to_string(minimum));
    }
    SidebandSpectrum spec(trunc, mod_frequency);
    for (int n = -trunc; n <= trunc; ++n) spec.set_amplitude(n, special::bessel_j(n, beta));
    return spec;
}

SidebandSpectrum apply_quadratic_phase(const SidebandSpectrum& spec, double alpha) {
    SidebandSpectrum out = spec;
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        const double nn = static_cast<double>(n);
        out.set_amplitude(n, spec.amplitude(n) * std::polar(1.0, alpha * nn * nn));
    }
    return out;
}

SidebandSpectrum apply_filter(const SidebandSpectrum& spec, const FilterKind& filter) {
    SidebandSpectrum out = spec;
    auto keep = [&](int n) -> bool {
        return std::visit(
            [n](const auto& f) -> bool {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, RemoveCarrier>) {
                    return n != 0;
                } else if constexpr (std::is_same_v<F, RemoveOddSidebands>) {
                    return n % 2 == 0;
                } else {
                    return f.indices.count(n) > 0;
                }
            },
            filter);
    };
    if (const auto* k = std::get_if<KeepIndices>(&filter); k && k->indices.empty()) {
        throw ConfigurationError("apply_filter: KeepIndices set is empty");
    }
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        if (!keep(n)) out.set_amplitude(n, 0.0);
    }
    if (!(out.total_power() > 0.0)) {
        throw DegenerateInputError("apply_filter: filter leaves no optical power");
    }
    return out;
}

cplx lag_overlap(const SidebandSpectrum& spec, int k) {
    return kernels::lag_overlap(spec.dense(), k);
}

double am_efficiency(const SidebandSpectrum& spec, int k) {
    if (k < 1) throw DomainError("am_efficiency: harmonic order must be >= 1");
    const double p = spec.total_power();
    if (!(p > 0.0)) throw DegenerateInputError("am_efficiency: spectrum carries no power");
    return std::abs(lag_overlap(spec, k)) / p;
}

std::vector<cplx> field_waveform(const SidebandSpectrum& spec, std::span<const double> times) {
    std::vector<double> phases(times.size());
    std::transform(times.begin(), times.end(), phases.begin(),
                   [w = spec.mod_frequency()](double t) {
                       return std::remainder(w * t, 2.0 * std::numbers::pi);
                   });
    std::vector<cplx> out(times.size());
    kernels::harmonic_series(spec.dense(), -spec.n_max(), phases, out);
    return out;
}

std::vector<double> intensity_waveform(const SidebandSpectrum& spec,
                                       std::span<const double> times) {
    if (times.empty()) throw DomainError("intensity_waveform: empty time grid");
    const auto field = field_waveform(spec, times);
    std::vector<double> out(field.size());
    const double scale = spec.carrier_power_scale();
    std::transform(field.begin(), field.end(), out.begin(),
                   [scale](cplx f) { return scale * std::norm(f); });
    return out;
}

std::vector<double> beat_period_grid(const SidebandSpectrum& spec, std::size_t samples) {
    if (samples == 0 || !(spec.mod_frequency() > 0.0)) {
        throw DomainError("beat_period_grid: need samples > 0 and a positive modulation frequency");
    }
    const double period = 2.0 * std::numbers::pi / spec.mod_frequency();
    std::vector<double> t(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        t[j] = period * static_cast<double>(j) / static_cast<double>(samples);
    }
    return t;
}

nlohmann::json to_json(const SidebandSpectrum& spec) {
    nlohmann::json amps = nlohmann::json::array();
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        const cplx a = spec.amplitude(n);
        amps.push_back({n, a.real(), a.imag()});
    }
    return {{"mod_frequency_rad_s", spec.mod_frequency()},
            {"carrier_power_scale", spec.carrier_power_scale()},
            {"amplitudes", amps}};
}

SidebandSpectrum spectrum_from_json(const nlohmann::json& doc) {
    try {
        const auto& amps = doc.at("amplitudes");
        int n_max = 0;
        for (const auto& row : amps) n_max = std::max(n_max, std::abs(row.at(0).get<int>()));
        SidebandSpectrum spec(n_max, doc.at("mod_frequency_rad_s").get<double>(),
                              doc.at("carrier_power_scale").get<double>());
        for (const auto& row : amps) {
            spec.set_amplitude(row.at(0).get<int>(),
                               {row.at(1).get<double>(), row.at(2).get<double>()});
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("spectrum JSON: ") + e.what());
    }
}

}  // namespace ramanforge::spectrum
