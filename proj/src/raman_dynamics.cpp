#include "ramanforge/raman_dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "ramanforge/errors.hpp"
#include "ramanforge/fitting.hpp"
#include "ramanforge/integrator.hpp"

namespace ramanforge::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTableSamplesPerHarmonic = 1420.0;

std::vector<double> linspace(double duration, std::size_t samples) {
    if (samples < 2) throw ConfigurationError("trajectory: need at least 2 samples");
    std::vector<double> t(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        t[j] = duration * static_cast<double>(j) / static_cast<double>(samples - 1);
    }
    t.back() = duration;
    return t;
}

void check_duration(double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ConfigurationError("evolve: duration must be positive and finite");
    }
}

ode::IntegratorOptions integrator_options(const EvolveOptions& o) {
    ode::IntegratorOptions opt;
    opt.rtol = o.rtol;
    opt.atol = o.atol;
    return opt;
}

cplx lag_term(const ThreeLevelParams& p) { return spectrum::lag_overlap(p.spectrum, p.harmonic); }

}  // namespace

void validate_spacing(const ThreeLevelParams& p) {
    if (p.harmonic < 1) throw ConfigurationError("ThreeLevelParams: harmonic must be >= 1");
    if (!(p.qubit_frequency > 0.0)) throw ConfigurationError("ThreeLevelParams: qubit frequency must be > 0");
    if (!(p.excited_linewidth >= 0.0)) throw ConfigurationError("ThreeLevelParams: linewidth must be >= 0");
    const double spacing = p.spectrum.mod_frequency() * p.harmonic;
    if (!(std::abs(spacing - p.qubit_frequency) <= 1e-9 * p.qubit_frequency)) {
        throw ConfigurationError("ThreeLevelParams: spectrum spacing times harmonic (" + std::to_string(spacing) +
                                 ") differs from the qubit frequency (" + std::to_string(p.qubit_frequency) + ")");
    }
}

void validate_tls_reduction(const ThreeLevelParams& p) {
    validate_spacing(p);
    const int extent = std::max(1, p.spectrum.significant_extent());
    const double required = 10.0 * extent * p.spectrum.mod_frequency();
    if (!(std::abs(p.detuning) >= required)) {
        throw ConfigurationError("two-level reduction needs |detuning| >= " + std::to_string(required) +
                                 " rad/s for this spectrum");
    }
}

double raman_rabi_frequency(const ThreeLevelParams& p) {
    validate_spacing(p);
    if (p.detuning == 0.0) throw SingularityError("raman_rabi_frequency: zero detuning");
    return p.spectrum.carrier_power_scale() / (2.0 * std::abs(p.detuning)) * std::abs(lag_term(p));
}

double raman_drive_phase(const ThreeLevelParams& p) {
    validate_spacing(p);
    return std::arg(lag_term(p));
}

DriveTable::DriveTable(const spectrum::SidebandSpectrum& spec, std::size_t samples) {
    if (!(spec.mod_frequency() > 0.0)) throw ConfigurationError("DriveTable: modulation frequency must be > 0");
    if (samples == 0) {
        const double extent = std::max(1, spec.significant_extent());
        samples = std::bit_ceil(static_cast<std::size_t>(std::ceil(kTableSamplesPerHarmonic * extent)));
    }
    if (samples < 4) throw ConfigurationError("DriveTable: need at least 4 samples");
    period_ = kTwoPi / spec.mod_frequency();
    dt_ = period_ / static_cast<double>(samples);
    inv_dt_ = 1.0 / dt_;

    spectrum::SidebandSpectrum derivative(spec.n_max(), spec.mod_frequency());
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        derivative.set_amplitude(n, spec.amplitude(n) * cplx(0.0, n * spec.mod_frequency()));
    }
    std::vector<double> times(samples);
    for (std::size_t j = 0; j < samples; ++j) times[j] = dt_ * static_cast<double>(j);
    values_ = spectrum::field_waveform(spec, times);
    slopes_ = spectrum::field_waveform(derivative, times);
}

cplx DriveTable::operator()(double t) const noexcept {
    const double u = t * inv_dt_;
    const double fl = std::floor(u);
    const double s = u - fl;
    const auto m = static_cast<long>(values_.size());
    long j = static_cast<long>(std::fmod(fl, static_cast<double>(m)));
    if (j < 0) j += m;
    const long j1 = (j + 1 == m) ? 0 : j + 1;
    const auto uj = static_cast<std::size_t>(j), uj1 = static_cast<std::size_t>(j1);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * values_[uj] + (h10 * dt_) * slopes_[uj] + h01 * values_[uj1] + (h11 * dt_) * slopes_[uj1];
}

std::vector<double> StateTrajectory::population(int level) const {
    if (level < 0 || level > 2) throw ConfigurationError("population: level must be 0, 1 or 2");
    std::vector<double> out(populations.size());
    for (std::size_t i = 0; i < populations.size(); ++i) out[i] = populations[i][static_cast<std::size_t>(level)];
    return out;
}

StateTrajectory evolve_tls(const ThreeLevelParams& p, double duration, const QubitState& initial,
                           const EvolveOptions& options) {
    validate_tls_reduction(p);
    check_duration(duration);
    if (std::abs(initial.norm() - 1.0) > 1e-10) throw ConfigurationError("evolve_tls: initial state not normalized");
    const DriveTable drive(p.spectrum);
    const double coupling = p.spectrum.carrier_power_scale() / (4.0 * p.detuning);  // Omega_TLS / (2 |f|^2)
    const double wq = p.qubit_frequency;
    auto rhs = [&](double t, const ode::State<2>& c) {
        const double g = coupling * std::norm(drive(t));
        const cplx rot = std::polar(1.0, -wq * t);
        // i dc/dt = -g [[1, rot], [conj(rot), 1]] c
        ode::State<2> d;
        d[0] = cplx(0.0, g) * (c[0] + rot * c[1]);
        d[1] = cplx(0.0, g) * (std::conj(rot) * c[0] + c[1]);
        return d;
    };
    const auto times = linspace(duration, options.samples);
    const auto states = ode::integrate<2>(rhs, initial, 0.0, times, integrator_options(options));
    StateTrajectory tr;
    tr.times = times;
    tr.populations.reserve(states.size());
    tr.coherences.reserve(states.size());
    for (const auto& s : states) {
        const double p0 = std::norm(s[0]), p1 = std::norm(s[1]);
        tr.populations.push_back({p0, p1, 0.0});
        tr.coherences.push_back(s[0] * std::conj(s[1]));
        tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(p0 + p1 - 1.0));
    }
    return tr;
}

StateTrajectory evolve_three_level(const ThreeLevelParams& p, double duration, const AtomState& initial,
                                   const EvolveOptions& options) {
    check_duration(duration);
    if (std::abs(initial.norm() - 1.0) > 1e-10) {
        throw ConfigurationError("evolve_three_level: initial state not normalized");
    }
    const bool driven = p.spectrum.total_power() > 0.0;
    if (driven) validate_spacing(p);
    const double omega0 = std::sqrt(p.spectrum.carrier_power_scale());
    const double wq = p.qubit_frequency;
    const cplx excited_energy(p.detuning, -0.5 * p.excited_linewidth);
    const DriveTable drive = driven ? DriveTable(p.spectrum) : DriveTable(spectrum::SidebandSpectrum(0, 1.0), 4);
    auto rhs = [&](double t, const ode::State<3>& c) {
        const cplx half = driven ? 0.5 * omega0 * drive(t) : cplx(0.0);
        const cplx rot = std::polar(1.0, -wq * t);
        const cplx half_c = std::conj(half);
        const cplx minus_i(0.0, -1.0);
        ode::State<3> d;
        d[0] = minus_i * (half_c * c[2]);
        d[1] = minus_i * (half_c * std::conj(rot) * c[2]);
        d[2] = minus_i * (half * (c[0] + rot * c[1]) + excited_energy * c[2]);
        return d;
    };
    const auto times = linspace(duration, options.samples);
    const auto states = ode::integrate<3>(rhs, initial, 0.0, times, integrator_options(options));
    StateTrajectory tr;
    tr.times = times;
    tr.populations.reserve(states.size());
    tr.coherences.reserve(states.size());
    for (const auto& s : states) {
        const double p0 = std::norm(s[0]), p1 = std::norm(s[1]), p2 = std::norm(s[2]);
        tr.populations.push_back({p0, p1, p2});
        tr.coherences.push_back(s[0] * std::conj(s[1]));
        tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(p0 + p1 + p2 - 1.0));
    }
    return tr;
}

double max_population_deviation(const StateTrajectory& a, const StateTrajectory& b, int level) {
    if (a.times.size() != b.times.size()) throw ConfigurationError("trajectories sampled on different grids");
    const auto pa = a.population(level), pb = b.population(level);
    double worst = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) worst = std::max(worst, std::abs(pa[i] - pb[i]));
    return worst;
}

ScatteringFigures scattering_figures(const ThreeLevelParams& p) {
    if (p.detuning == 0.0) throw SingularityError("scattering_figures: zero detuning");
    if (!(p.excited_linewidth > 0.0)) throw DomainError("scattering_figures: linewidth must be > 0");
    ScatteringFigures f;
    const double mean_intensity = p.spectrum.carrier_power_scale() * p.spectrum.total_power();
    f.gamma_sc = p.excited_linewidth * mean_intensity / (4.0 * p.detuning * p.detuning);
    f.rabi_frequency = raman_rabi_frequency(p);
    f.pi_pulses_per_scatter = f.gamma_sc > 0.0 ? (f.rabi_frequency / std::numbers::pi) / f.gamma_sc : 0.0;
    return f;
}

RabiMeasurement measure_tls_rabi(const ThreeLevelParams& p, double periods, const EvolveOptions& options) {
    if (!(periods > 0.0)) throw ConfigurationError("measure_tls_rabi: periods must be > 0");
    RabiMeasurement m;
    m.predicted = raman_rabi_frequency(p);
    if (!(m.predicted > 0.0)) throw DegenerateInputError("measure_tls_rabi: spectrum has no Raman coupling");
    const double duration = periods * kTwoPi / m.predicted;
    m.trajectory = evolve_tls(p, duration, QubitState(1.0, 0.0), options);
    const auto p1 = m.trajectory.population(1);
    fitting::FitOptions fo;
    fo.frequency_hint = m.predicted / kTwoPi;
    const auto fit = fitting::fit_decay(m.trajectory.times, p1, fitting::DecayModel::DampedCosine, fo);
    m.frequency = kTwoPi * fit.param("frequency");
    m.frequency_uncertainty = kTwoPi * fit.uncertainty("frequency");
    return m;
}

void write_trajectory_csv(const StateTrajectory& tr, std::ostream& out) {
    out << "t,p0,p1,p2,re_coh,im_coh\n";
    char buf[256];
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& pop = tr.populations[i];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", tr.times[i], pop[0], pop[1], pop[2],
                      tr.coherences[i].real(), tr.coherences[i].imag());
        out << buf;
    }
}

}  // namespace ramanforge::dynamics
