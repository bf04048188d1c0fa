#include "ramanforge/pulse_sequences.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "ramanforge/errors.hpp"
#include "ramanforge/random.hpp"

namespace ramanforge::sequences {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_count(int n, const char* what) {
    if (n < 1) throw ConfigurationError(std::string(what) + ": count must be >= 1");
}

void check_gap(double gap, const char* what) {
    if (!(gap >= 0.0) || !std::isfinite(gap)) throw ConfigurationError(std::string(what) + ": gap must be >= 0");
}

class Builder {
public:
    Builder(double pi_time, std::string label) : pi_time_(pi_time) { seq_.label = std::move(label); }

    void pulse(double phase, double angle) {
        seq_.elements.push_back(Pulse{phase, angle, pi_time_ * angle / kPi});
    }
    void wait(double duration) {
        if (duration > 0.0) seq_.elements.push_back(FreeEvolution{duration});
    }
    void centered_pi(double phase, double gap) {
        wait(0.5 * gap);
        pulse(phase, kPi);
        wait(0.5 * gap);
    }
    void closer(Closer c) { pulse(c == Closer::PlusX ? 0.0 : kPi, 0.5 * kPi); }
    PulseSequence take() { return std::move(seq_); }

private:
    double pi_time_;
    PulseSequence seq_;
};

// Phases of XY8 followed by its phase-inverted copy.
constexpr std::array<double, 16> kXy16Phases = {
    0.0, 0.5 * kPi, 0.0, 0.5 * kPi, 0.5 * kPi, 0.0, 0.5 * kPi, 0.0,
    kPi, 1.5 * kPi, kPi, 1.5 * kPi, 1.5 * kPi, kPi, 1.5 * kPi, kPi,
};

struct ShotDraw {
    double detuning = 0.0;
    bool depolarized = false;
};

bool stochastic_detuning(const DetuningDistribution& d) { return !std::holds_alternative<DeltaDetuning>(d); }

double delta_value(const DetuningDistribution& d) {
    if (const auto* v = std::get_if<DeltaDetuning>(&d)) return v->value;
    return 0.0;
}

double depolarizing_probability(const NoiseModel& noise, double dose) {
    return 1.0 - std::pow(1.0 - noise.scatter_prob, dose);
}

double idle_probability(const NoiseModel& noise, double idle) {
    if (!std::isfinite(noise.idle_t1)) return 0.0;
    return -std::expm1(-idle / noise.idle_t1);
}

bool needs_draws(const NoiseModel& noise) {
    return stochastic_detuning(noise.detuning) || noise.scatter_prob > 0.0 || std::isfinite(noise.idle_t1);
}

std::vector<ShotDraw> draw_shots(const NoiseModel& noise, double dose, double idle, long shots,
                                 std::uint64_t stream) {
    const auto n = static_cast<std::size_t>(shots);
    rng::Engine point = rng::make_engine(noise.seed, stream, 0);
    const auto perm_detuning = rng::permutation(n, point);
    const auto perm_scatter = rng::permutation(n, point);
    const auto perm_idle = rng::permutation(n, point);
    const double p_scatter = depolarizing_probability(noise, dose);
    const double p_idle = idle_probability(noise, idle);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<ShotDraw> draws(n);
    for (std::size_t k = 0; k < n; ++k) {
        rng::Engine shot = rng::make_engine(noise.seed, stream, k + 1);
        const double u_det = (static_cast<double>(perm_detuning[k]) + rng::uniform_open(shot)) * inv_n;
        const double u_sc = (static_cast<double>(perm_scatter[k]) + rng::uniform_open(shot)) * inv_n;
        const double u_idle = (static_cast<double>(perm_idle[k]) + rng::uniform_open(shot)) * inv_n;
        draws[k].detuning = detuning_quantile(noise.detuning, u_det);
        draws[k].depolarized = (u_sc < p_scatter) || (u_idle < p_idle);
    }
    return draws;
}

PointResult summarize(const std::vector<double>& values) {
    PointResult r;
    r.shots = static_cast<long>(values.size());
    const double n = static_cast<double>(values.size());
    r.signal = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.signal) * (v - r.signal);
        r.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return r;
}

void check_shots(long shots) {
    if (shots < 1) throw ConfigurationError("shots must be >= 1");
}

}  // namespace

double PulseSequence::total_duration() const {
    double t = 0.0;
    for (const auto& e : elements) {
        t += std::visit([](const auto& x) { return x.duration; }, e);
    }
    return t;
}

double PulseSequence::idle_duration() const {
    double t = 0.0;
    for (const auto& e : elements) {
        if (const auto* f = std::get_if<FreeEvolution>(&e)) t += f->duration;
    }
    return t;
}

int PulseSequence::pulse_count() const {
    int n = 0;
    for (const auto& e : elements) n += std::holds_alternative<Pulse>(e) ? 1 : 0;
    return n;
}

double PulseSequence::pi_dose() const {
    double d = 0.0;
    for (const auto& e : elements) {
        if (const auto* p = std::get_if<Pulse>(&e)) d += p->angle / kPi;
    }
    return d;
}

PulseSequence build_sequence(const SequenceKind& kind, double pi_time) {
    if (!(pi_time > 0.0) || !std::isfinite(pi_time)) throw ConfigurationError("build_sequence: pi_time must be > 0");
    return std::visit(
        overloaded{
            [&](const Rabi& k) {
                if (!(k.duration > 0.0)) throw ConfigurationError("rabi: duration must be > 0");
                Builder b(pi_time, "rabi");
                double remaining = kPi * k.duration / pi_time;
                while (remaining > 0.0) {
                    const double chunk = std::min(remaining, kTwoPi);
                    b.pulse(0.0, chunk);
                    remaining -= chunk;
                }
                return b.take();
            },
            [&](const Ramsey& k) {
                check_gap(k.gap, "ramsey");
                Builder b(pi_time, "ramsey");
                b.pulse(0.0, 0.5 * kPi);
                b.wait(k.gap);
                b.pulse(kPi - k.final_phase, 0.5 * kPi);
                return b.take();
            },
            [&](const Cpmg& k) {
                check_count(k.n, "cpmg");
                check_gap(k.gap, "cpmg");
                Builder b(pi_time, "cpmg");
                b.pulse(0.0, 0.5 * kPi);
                for (int i = 0; i < k.n; ++i) b.centered_pi(0.5 * kPi, k.gap);
                b.closer(k.closer);
                return b.take();
            },
            [&](const Xy16& k) {
                check_count(k.n_repeats, "xy16");
                check_gap(k.gap, "xy16");
                Builder b(pi_time, "xy16");
                b.pulse(0.0, 0.5 * kPi);
                for (int r = 0; r < k.n_repeats; ++r) {
                    for (double phase : kXy16Phases) b.centered_pi(phase, k.gap);
                }
                b.closer(k.closer);
                return b.take();
            },
            [&](const PlainTrain& k) {
                check_count(k.n, "plain_train");
                check_gap(k.gap, "plain_train");
                Builder b(pi_time, "plain_train");
                b.pulse(0.0, 0.5 * kPi);
                for (int i = 0; i < k.n; ++i) b.centered_pi(0.0, k.gap);
                b.closer(k.closer);
                return b.take();
            },
        },
        kind);
}

void validate(const NoiseModel& noise) {
    if (!(noise.scatter_prob >= 0.0 && noise.scatter_prob < 1.0)) {
        throw ConfigurationError("noise: scatter probability must lie in [0, 1)");
    }
    if (!std::isfinite(noise.amplitude_error)) throw ConfigurationError("noise: amplitude error must be finite");
    if (!(noise.idle_t1 > 0.0)) throw ConfigurationError("noise: idle T1 must be > 0");
    std::visit(overloaded{
                   [](const DeltaDetuning& d) {
                       if (!std::isfinite(d.value)) throw ConfigurationError("noise: detuning must be finite");
                   },
                   [](const GaussianDetuning& d) {
                       if (!(d.sigma >= 0.0) || !std::isfinite(d.mean)) {
                           throw ConfigurationError("noise: gaussian detuning needs sigma >= 0");
                       }
                   },
                   [](const ExponentialDetuning& d) {
                       if (!(d.mean > 0.0)) throw ConfigurationError("noise: exponential detuning needs mean > 0");
                   },
               },
               noise.detuning);
}

double detuning_quantile(const DetuningDistribution& dist, double u) {
    return std::visit(overloaded{
                          [](const DeltaDetuning& d) { return d.value; },
                          [u](const GaussianDetuning& d) { return d.mean + d.sigma * rng::normal_quantile(u); },
                          [u](const ExponentialDetuning& d) { return -d.mean * std::log1p(-u); },
                      },
                      dist);
}

double coherent_signal(const PulseSequence& seq, double detuning, double amplitude_error) {
    cplx a0 = 1.0, a1 = 0.0;
    const cplx minus_i(0.0, -1.0);
    for (const auto& e : seq.elements) {
        if (const auto* p = std::get_if<Pulse>(&e)) {
            const double half = 0.5 * p->angle * (1.0 + amplitude_error);
            const double c = std::cos(half), s = std::sin(half);
            const cplx off_01 = minus_i * s * std::polar(1.0, -p->axis_phase);
            const cplx off_10 = minus_i * s * std::polar(1.0, p->axis_phase);
            const cplx b0 = c * a0 + off_01 * a1;
            const cplx b1 = off_10 * a0 + c * a1;
            a0 = b0;
            a1 = b1;
        } else {
            const double phase = 0.5 * detuning * std::get<FreeEvolution>(e).duration;
            a0 *= std::polar(1.0, -phase);
            a1 *= std::polar(1.0, phase);
        }
    }
    return std::norm(a0);
}

PointResult simulate_sequence(const PulseSequence& seq, const NoiseModel& noise, long shots, std::uint64_t stream) {
    validate(noise);
    check_shots(shots);
    if (!needs_draws(noise)) {
        PointResult r;
        r.signal = coherent_signal(seq, delta_value(noise.detuning), noise.amplitude_error);
        r.shots = shots;
        return r;
    }
    const auto draws = draw_shots(noise, seq.pi_dose(), seq.idle_duration(), shots, stream);
    const bool cached = !stochastic_detuning(noise.detuning);
    const double fixed = cached ? coherent_signal(seq, delta_value(noise.detuning), noise.amplitude_error) : 0.0;
    std::vector<double> values(draws.size());
    for (std::size_t k = 0; k < draws.size(); ++k) {
        if (draws[k].depolarized) {
            values[k] = 0.5;
        } else {
            values[k] = cached ? fixed : coherent_signal(seq, draws[k].detuning, noise.amplitude_error);
        }
    }
    return summarize(values);
}

SequenceResult scan_sequences(const std::string& label, std::span<const double> scan_values,
                              const SequenceFactory& factory, const NoiseModel& noise, long shots) {
    check_shots(shots);
    SequenceResult r;
    r.label = label;
    r.shots = shots;
    r.seed = noise.seed;
    for (std::size_t i = 0; i < scan_values.size(); ++i) {
        const auto point = simulate_sequence(factory(scan_values[i]), noise, shots, i);
        r.scan_values.push_back(scan_values[i]);
        r.signal.push_back(point.signal);
        r.std_error.push_back(point.std_error);
    }
    return r;
}

CpmgScan cpmg_scan(std::span<const int> pulse_counts, double gap, double pi_time, const NoiseModel& noise,
                   long shots) {
    validate(noise);
    check_shots(shots);
    CpmgScan out;
    for (auto* r : {&out.plus_x, &out.minus_x, &out.difference}) {
        r->shots = shots;
        r->seed = noise.seed;
    }
    out.plus_x.label = "cpmg_plus_x";
    out.minus_x.label = "cpmg_minus_x";
    out.difference.label = "cpmg";
    for (std::size_t i = 0; i < pulse_counts.size(); ++i) {
        const int n = pulse_counts[i];
        const auto plus = build_sequence(Cpmg{n, gap, Closer::PlusX}, pi_time);
        const auto minus = build_sequence(Cpmg{n, gap, Closer::MinusX}, pi_time);
        const auto draws = draw_shots(noise, plus.pi_dose(), plus.idle_duration(), shots, i);
        const bool cached = !stochastic_detuning(noise.detuning);
        const double d0 = delta_value(noise.detuning);
        const double fp = cached ? coherent_signal(plus, d0, noise.amplitude_error) : 0.0;
        const double fm = cached ? coherent_signal(minus, d0, noise.amplitude_error) : 0.0;
        std::vector<double> vp(draws.size()), vm(draws.size()), vd(draws.size());
        for (std::size_t k = 0; k < draws.size(); ++k) {
            if (draws[k].depolarized) {
                vp[k] = vm[k] = 0.5;
            } else {
                vp[k] = cached ? fp : coherent_signal(plus, draws[k].detuning, noise.amplitude_error);
                vm[k] = cached ? fm : coherent_signal(minus, draws[k].detuning, noise.amplitude_error);
            }
            vd[k] = vm[k] - vp[k];
        }
        const double x = static_cast<double>(n);
        for (auto [res, vals] : {std::pair{&out.plus_x, &vp}, std::pair{&out.minus_x, &vm},
                                 std::pair{&out.difference, &vd}}) {
            const auto s = summarize(*vals);
            res->scan_values.push_back(x);
            res->signal.push_back(s.signal);
            res->std_error.push_back(s.std_error);
        }
    }
    return out;
}

SequenceResult ramsey_contrast(const NoiseModel& noise, std::span<const double> gaps, long shots, double pi_time) {
    validate(noise);
    check_shots(shots);
    SequenceResult r;
    r.label = "ramsey";
    r.shots = shots;
    r.seed = noise.seed;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        std::array<PulseSequence, 4> seqs;
        for (int q = 0; q < 4; ++q) seqs[static_cast<std::size_t>(q)] = build_sequence(Ramsey{gaps[i], 0.5 * kPi * q}, pi_time);
        std::vector<ShotDraw> draws;
        if (needs_draws(noise)) {
            draws = draw_shots(noise, seqs[0].pi_dose(), seqs[0].idle_duration(), shots, i);
        } else {
            draws.assign(static_cast<std::size_t>(shots), ShotDraw{delta_value(noise.detuning), false});
        }
        std::vector<double> xs(draws.size()), ys(draws.size());
        for (std::size_t k = 0; k < draws.size(); ++k) {
            std::array<double, 4> s{0.5, 0.5, 0.5, 0.5};
            if (!draws[k].depolarized) {
                for (std::size_t q = 0; q < 4; ++q) {
                    s[q] = coherent_signal(seqs[q], draws[k].detuning, noise.amplitude_error);
                }
            }
            xs[k] = s[0] - s[2];
            ys[k] = s[3] - s[1];
        }
        const auto px = summarize(xs), py = summarize(ys);
        const double c = std::hypot(px.signal, py.signal);
        const double err = c > 0.0 ? std::hypot(px.signal * px.std_error, py.signal * py.std_error) / c
                                   : std::hypot(px.std_error, py.std_error);
        r.scan_values.push_back(gaps[i]);
        r.signal.push_back(c);
        r.std_error.push_back(err);
    }
    return r;
}

SequenceResult fit_result(SequenceResult result, fitting::DecayModel model) {
    result.fit = fitting::fit_decay(result.scan_values, result.signal, model);
    return result;
}

}  // namespace ramanforge::sequences
