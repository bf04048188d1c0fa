#include "ramanforge/cli_reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ramanforge/array_ensemble.hpp"
#include "ramanforge/csv.hpp"
#include "ramanforge/errors.hpp"
#include "ramanforge/fitting.hpp"
#include "ramanforge/kernels.hpp"
#include "ramanforge/light_shift.hpp"
#include "ramanforge/pulse_sequences.hpp"
#include "ramanforge/raman_dynamics.hpp"
#include "ramanforge/special_functions.hpp"
#include "ramanforge/spectrum.hpp"

namespace ramanforge::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Node {
public:
    Node(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (obj_ && obj_->is_null()) obj_ = nullptr;
        if (obj_ && !obj_->is_object()) fail("expected an object");
    }

    const std::string& path() const noexcept { return path_; }

    [[noreturn]] void fail(const std::string& message) const { throw ConfigurationError(path_ + ": " + message); }
    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ConfigurationError(path_ + "." + key + ": " + message);
    }

    const json* get(const std::string& key) {
        used_.insert(key);
        if (!obj_) return nullptr;
        const auto it = obj_->find(key);
        if (it == obj_->end() || it->is_null()) return nullptr;
        return &*it;
    }

    bool has(const std::string& key) const {
        if (!obj_) return false;
        const auto it = obj_->find(key);
        return it != obj_->end() && !it->is_null();
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(key, "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) fail(key, "must be finite");
        return x;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) {
            used_.insert(key);
            return std::nullopt;
        }
        return number(key, 0.0);
    }

    long integer(const std::string& key, long fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) fail(key, "expected an integer");
        return v->get<long>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (v->is_number_unsigned()) return v->get<std::uint64_t>();
        if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "expected a non-negative integer");
        return static_cast<std::uint64_t>(v->get<long long>());
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(key, "expected a string");
        return v->get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(key, "expected true or false");
        return v->get<bool>();
    }

    // Angular frequency from either base_hz (times 2 pi) or base_rad_s.
    double frequency(const std::string& base, double fallback_rad_s) {
        const std::string hz = base + "_hz", rad = base + "_rad_s";
        if (has(hz) && has(rad)) fail(base, "give either " + hz + " or " + rad + ", not both");
        if (has(hz)) return kTwoPi * number(hz, 0.0);
        used_.insert(hz);
        return number(rad, fallback_rad_s);
    }

    std::vector<long> integers(const std::string& key) {
        const json* v = get(key);
        if (!v) return {};
        if (!v->is_array()) fail(key, "expected an array of integers");
        std::vector<long> out;
        for (const auto& e : *v) {
            if (!e.is_number_integer()) fail(key, "expected an array of integers");
            out.push_back(e.get<long>());
        }
        return out;
    }

    Node child(const std::string& key) {
        const json* v = get(key);
        return Node(v, path_ + "." + key);
    }

    void finish() const {
        if (!obj_) return;
        for (const auto& item : obj_->items()) {
            if (!used_.count(item.key())) fail(item.key(), "unknown key");
        }
    }

    void positive(const std::string& key, double value) const {
        if (!(value > 0.0)) fail(key, "must be > 0");
    }

private:
    const json* obj_;
    std::string path_;
    std::set<std::string> used_;
};

const std::vector<std::string>& simulation_names() {
    static const std::vector<std::string> names{"rabi",     "ramsey", "cpmg", "xy16", "ensemble",
                                                "fig1e",    "lightshift", "tls", "idle_decay"};
    return names;
}

conversion::ConversionMethod method_from_name(Node& node, const std::string& name, double alpha) {
    if (name == "filter_carrier") return conversion::FilterCarrier{};
    if (name == "filter_mzi") return conversion::FilterMachZehnderInterferometer{};
    if (name == "mzm_half") return conversion::MZModulatorHalfTransmission{};
    if (name == "mzm_min") return conversion::MZModulatorMinTransmission{};
    if (name == "dispersive") {
        if (!(alpha > 0.0 && alpha < kPi)) node.fail("alpha_rad", "must lie in (0, pi)");
        return conversion::Dispersive{alpha};
    }
    node.fail("name", "unknown method '" + name +
                          "' (filter_carrier, filter_mzi, mzm_half, mzm_min, dispersive)");
}

lightshift::PolarizationVector polarization_from(Node& node, const std::string& key) {
    const json* v = node.get(key);
    if (!v) return lightshift::PolarizationVector::named("sigma_plus_z");
    try {
        if (v->is_string()) return lightshift::PolarizationVector::named(v->get<std::string>());
        if (v->is_array() && v->size() == 3) {
            lightshift::CVec3 jones;
            for (int i = 0; i < 3; ++i) {
                const json& c = (*v)[static_cast<std::size_t>(i)];
                if (c.is_number()) {
                    jones[i] = c.get<double>();
                } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
                    jones[i] = {c[0].get<double>(), c[1].get<double>()};
                } else {
                    node.fail(key, "components must be numbers or [re, im] pairs");
                }
            }
            return lightshift::PolarizationVector(jones);
        }
    } catch (const ConfigurationError& e) {
        if (std::string(e.what()).rfind(node.path(), 0) == 0) throw;
        node.fail(key, e.what());
    }
    node.fail(key, "expected a polarization name or a 3-component Jones vector");
}

struct Config {
    std::string simulation;
    std::string label;
    std::uint64_t seed = 1;
    long shots = 2000;

    double qubit_frequency = kTwoPi * 6.8e9;
    std::optional<double> beta;
    conversion::ConversionMethod method = conversion::Dispersive{0.76};

    double rabi_frequency = kTwoPi * 1.95e6;
    double detuning = kTwoPi * 3e12;
    double linewidth = kTwoPi * 6.0666e6;
    double periods = 3.0;
    long samples = 2001;

    sequences::NoiseModel noise;
    double background_lifetime = kInf;

    std::optional<double> pi_time;
    long points = 40;
    double gap = 0.0;
    std::optional<double> max_pulses;
    std::optional<double> max_duration;
    std::optional<double> max_gap;
    std::optional<double> max_hold;
    long repeats = 16;
    std::string fit_model;

    ensemble::ArrayGeometry geometry;
    ensemble::BeamProfile beam;
    std::vector<int> rows;
    ensemble::EnsembleOptions ensemble_options;

    lightshift::PolarizationVector polarization = lightshift::PolarizationVector::named("sigma_plus_z");
    double intensity = 1.0;
    double laser_frequency = kTwoPi * (384.230484e12 - 93e9);
    double d1_frequency = kTwoPi * 377.107463e12;
    double d2_frequency = kTwoPi * 384.230484e12;
    lightshift::Vec3 quantization_axis{0.0, 0.0, 1.0};

    std::optional<fs::path> out_dir;
};

std::string default_fit_model(const std::string& sim) {
    if (sim == "rabi" || sim == "ensemble" || sim == "tls") return "damped_cosine";
    if (sim == "ramsey") return "thermal";
    if (sim == "cpmg" || sim == "idle_decay") return "exponential";
    return "none";
}

void parse_detuning(Node node, Config& c) {
    const std::string kind = node.string("kind", c.simulation == "ramsey" ? "exponential" : "delta");
    if (kind == "delta") {
        c.noise.detuning = sequences::DeltaDetuning{node.frequency("value", 0.0)};
    } else if (kind == "gaussian") {
        const double mean = node.frequency("mean", 0.0);
        const double sigma = node.frequency("sigma", 0.0);
        if (!(sigma >= 0.0)) node.fail("sigma_hz", "must be >= 0");
        c.noise.detuning = sequences::GaussianDetuning{mean, sigma};
    } else if (kind == "exponential") {
        const double mean = node.frequency("mean", 2161.0);
        if (!(mean > 0.0)) node.fail("mean_hz", "must be > 0");
        c.noise.detuning = sequences::ExponentialDetuning{mean};
    } else {
        node.fail("kind", "unknown detuning kind '" + kind + "' (delta, gaussian, exponential)");
    }
    node.finish();
}

Config parse_config(const json& doc, const RunOverrides& overrides) {
    Node root(&doc, "config");
    Config c;
    c.simulation = root.string("simulation", "cpmg");
    const auto& names = simulation_names();
    if (std::find(names.begin(), names.end(), c.simulation) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        root.fail("simulation", "unknown simulation '" + c.simulation + "' (" + list + ")");
    }
    c.label = root.string("label", c.simulation);
    if (c.label.empty() || c.label.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") !=
                               std::string::npos) {
        root.fail("label", "use letters, digits, '_', '-' and '.' only");
    }
    c.seed = overrides.seed.value_or(root.unsigned_integer("seed", 1));
    c.shots = root.integer("shots", 2000);
    if (overrides.shots) c.shots = *overrides.shots;
    if (c.shots < 1) root.fail("shots", "must be >= 1");

    {
        Node s = root.child("spectrum");
        c.qubit_frequency = s.frequency("qubit_frequency", c.qubit_frequency);
        s.positive("qubit_frequency_hz", c.qubit_frequency);
        c.beta = s.optional_number("beta_rad");
        if (c.beta && !(*c.beta > 0.0 && *c.beta <= kTwoPi)) s.fail("beta_rad", "must lie in (0, 2pi]");
        s.finish();
    }
    {
        Node m = root.child("method");
        const std::string name = m.string("name", "dispersive");
        const double alpha = m.number("alpha_rad", 0.76);
        c.method = method_from_name(m, name, alpha);
        m.finish();
    }
    {
        Node d = root.child("dynamics");
        c.rabi_frequency = d.frequency("rabi_frequency", c.rabi_frequency);
        d.positive("rabi_frequency_hz", c.rabi_frequency);
        c.detuning = d.frequency("detuning", c.detuning);
        if (c.detuning == 0.0) d.fail("detuning_hz", "must be non-zero");
        c.linewidth = d.frequency("linewidth", c.linewidth);
        if (!(c.linewidth >= 0.0)) d.fail("linewidth_hz", "must be >= 0");
        c.periods = d.number("periods", c.periods);
        d.positive("periods", c.periods);
        c.samples = d.integer("samples", c.samples);
        if (c.samples < 16) d.fail("samples", "must be >= 16");
        d.finish();
    }
    {
        Node n = root.child("noise");
        c.noise.scatter_prob = n.number("scatter_prob", c.simulation == "cpmg" ? 1.0 / 7852.0 : 0.0);
        if (!(c.noise.scatter_prob >= 0.0 && c.noise.scatter_prob < 1.0)) n.fail("scatter_prob", "must lie in [0, 1)");
        c.noise.amplitude_error = n.number("amplitude_error", c.simulation == "xy16" ? 0.01 : 0.0);
        if (!(c.noise.amplitude_error > -1.0)) n.fail("amplitude_error", "must be > -1");
        const double t1_default = c.simulation == "idle_decay" ? 1.0 : kInf;
        c.noise.idle_t1 = n.optional_number("idle_t1_s").value_or(t1_default);
        n.positive("idle_t1_s", c.noise.idle_t1);
        c.background_lifetime = n.optional_number("background_lifetime_s").value_or(kInf);
        n.positive("background_lifetime_s", c.background_lifetime);
        parse_detuning(n.child("detuning"), c);
        n.finish();
        c.noise.seed = c.seed;
    }
    {
        Node s = root.child("sequence");
        c.pi_time = s.optional_number("pi_time_s");
        if (c.pi_time) s.positive("pi_time_s", *c.pi_time);
        const long default_points = c.simulation == "rabi" ? 60 : (c.simulation == "idle_decay" ? 30 : 40);
        c.points = s.integer("points", default_points);
        if (c.points < 5) s.fail("points", "must be >= 5");
        c.gap = s.number("gap_s", 0.0);
        if (!(c.gap >= 0.0)) s.fail("gap_s", "must be >= 0");
        c.max_pulses = s.optional_number("max_pulses");
        if (c.max_pulses && !(*c.max_pulses >= 1.0)) s.fail("max_pulses", "must be >= 1");
        c.max_duration = s.optional_number("max_duration_s");
        if (c.max_duration) s.positive("max_duration_s", *c.max_duration);
        c.max_gap = s.optional_number("max_gap_s");
        if (c.max_gap) s.positive("max_gap_s", *c.max_gap);
        c.max_hold = s.optional_number("max_hold_s");
        if (c.max_hold) s.positive("max_hold_s", *c.max_hold);
        c.repeats = s.integer("repeats", c.repeats);
        if (c.repeats < 1) s.fail("repeats", "must be >= 1");
        c.fit_model = s.string("fit_model", default_fit_model(c.simulation));
        if (c.fit_model != "none") {
            try {
                (void)fitting::model_from_name(c.fit_model);
            } catch (const ConfigurationError&) {
                s.fail("fit_model", "unknown model '" + c.fit_model +
                                        "' (none, exponential, gaussian, damped_cosine, thermal)");
            }
        }
        s.finish();
    }
    {
        Node a = root.child("array");
        auto& g = c.geometry;
        g.rows = static_cast<int>(a.integer("rows", g.rows));
        g.cols = static_cast<int>(a.integer("cols", g.cols));
        g.pitch_x = a.number("pitch_x_m", g.pitch_x);
        g.pitch_y = a.number("pitch_y_m", g.pitch_y);
        g.fill_probability = a.number("fill_probability", g.fill_probability);
        g.fill_seed = a.unsigned_integer("fill_seed", c.seed);
        auto& b = c.beam;
        b.waist_minor = a.number("waist_minor_m", b.waist_minor);
        b.waist_major = a.number("waist_major_m", b.waist_major);
        b.offset_u = a.number("offset_u_m", b.offset_u);
        b.offset_v = a.number("offset_v_m", b.offset_v);
        b.peak_rabi = a.frequency("peak_rabi", c.rabi_frequency);
        for (long r : a.integers("selected_rows")) {
            if (r < 0 || r >= g.rows) a.fail("selected_rows", "row " + std::to_string(r) + " outside the array");
            c.rows.push_back(static_cast<int>(r));
        }
        auto& o = c.ensemble_options;
        o.duration = a.number("duration_s", o.duration);
        o.samples = static_cast<std::size_t>(std::max(0L, a.integer("samples", static_cast<long>(o.samples))));
        o.power_sigma = a.number("power_sigma", o.power_sigma);
        o.power_shots = static_cast<int>(a.integer("power_shots", o.power_shots));
        try {
            ensemble::validate(g);
            ensemble::validate(b);
        } catch (const ConfigurationError& e) {
            a.fail(e.what());
        }
        if (!(o.duration > 0.0)) a.fail("duration_s", "must be > 0");
        if (o.samples < 16) a.fail("samples", "must be >= 16");
        if (!(o.power_sigma >= 0.0)) a.fail("power_sigma", "must be >= 0");
        if (o.power_shots < 1) a.fail("power_shots", "must be >= 1");
        a.finish();
    }
    {
        Node l = root.child("lightshift");
        c.polarization = polarization_from(l, "polarization");
        c.intensity = l.number("intensity", c.intensity);
        if (!(c.intensity >= 0.0)) l.fail("intensity", "must be >= 0");
        c.laser_frequency = l.frequency("laser_frequency", c.laser_frequency);
        c.d1_frequency = l.frequency("d1_frequency", c.d1_frequency);
        c.d2_frequency = l.frequency("d2_frequency", c.d2_frequency);
        if (const json* axis = l.get("quantization_axis")) {
            if (!axis->is_array() || axis->size() != 3) l.fail("quantization_axis", "expected [x, y, z]");
            for (int i = 0; i < 3; ++i) {
                const json& e = (*axis)[static_cast<std::size_t>(i)];
                if (!e.is_number()) l.fail("quantization_axis", "expected [x, y, z]");
                c.quantization_axis[i] = e.get<double>();
            }
            if (std::abs(c.quantization_axis.norm() - 1.0) > 1e-9) l.fail("quantization_axis", "must be a unit vector");
        }
        l.finish();
    }
    {
        Node o = root.child("output");
        const std::string dir = o.string("directory", "");
        if (!dir.empty()) c.out_dir = fs::path(dir);
        o.finish();
    }
    root.finish();
    if (overrides.out_dir) c.out_dir = overrides.out_dir;
    return c;
}

std::vector<double> linspace(double first, double last, long count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        v[static_cast<std::size_t>(i)] = first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

double pi_time_of(const Config& c) { return c.pi_time.value_or(kPi / c.rabi_frequency); }

ojson numbers_json(const std::vector<std::string>& names, const std::vector<double>& values) {
    ojson o = ojson::object();
    for (std::size_t i = 0; i < names.size(); ++i) o[names[i]] = values[i];
    return o;
}

struct Outcome {
    std::optional<fitting::FitResult> fit;
    ojson extras = ojson::object();
    std::vector<std::pair<std::string, csv::Table>> tables;  // file suffix, content
};

std::optional<fitting::FitResult> fit_if_requested(const Config& c, std::span<const double> xs,
                                                   std::span<const double> ys, fitting::FitOptions options = {}) {
    if (c.fit_model == "none") return std::nullopt;
    return fitting::fit_decay(xs, ys, fitting::model_from_name(c.fit_model), options);
}

csv::Table scan_table(const sequences::SequenceResult& r) {
    csv::Table t({"scan_value", "signal", "stderr"});
    for (std::size_t i = 0; i < r.scan_values.size(); ++i) {
        t.add_row({r.scan_values[i], r.signal[i], r.std_error[i]});
    }
    return t;
}

Outcome run_rabi(const Config& c) {
    const double pi_time = pi_time_of(c);
    const double rabi = kPi / pi_time;
    const double span = c.max_duration.value_or(4.0 * kTwoPi / rabi);
    std::vector<double> durations(static_cast<std::size_t>(c.points));
    for (long i = 0; i < c.points; ++i) durations[static_cast<std::size_t>(i)] = span * (i + 1.0) / c.points;
    auto factory = [pi_time](double d) { return sequences::build_sequence(sequences::Rabi{d}, pi_time); };
    const auto r = sequences::scan_sequences("rabi", durations, factory, c.noise, c.shots);
    Outcome out;
    fitting::FitOptions fo;
    fo.frequency_hint = rabi / kTwoPi;
    out.fit = fit_if_requested(c, r.scan_values, r.signal, fo);
    out.extras["pi_time_s"] = pi_time;
    out.tables.emplace_back("", scan_table(r));
    return out;
}

Outcome run_ramsey(const Config& c) {
    const auto gaps = linspace(0.0, c.max_gap.value_or(5e-3), c.points);
    const auto r = sequences::ramsey_contrast(c.noise, gaps, c.shots, pi_time_of(c));
    Outcome out;
    out.fit = fit_if_requested(c, r.scan_values, r.signal);
    if (out.fit) {
        out.extras["t2_star_s"] = out.fit->one_over_e_time();
        out.extras["t2_star_uncertainty_s"] = out.fit->one_over_e_uncertainty();
    }
    out.tables.emplace_back("", scan_table(r));
    return out;
}

Outcome run_cpmg(const Config& c) {
    const double p = c.noise.scatter_prob;
    const double max_pulses = c.max_pulses.value_or(p > 0.0 ? std::round(3.0 / p) : 1000.0);
    std::vector<int> counts;
    for (long i = 1; i <= c.points; ++i) {
        const int n = std::max(1, static_cast<int>(std::lround(max_pulses * static_cast<double>(i) / c.points)));
        if (counts.empty() || n > counts.back()) counts.push_back(n);
    }
    if (counts.size() < 5) throw ConfigurationError("config.sequence.max_pulses: too small for the requested points");
    const auto scan = sequences::cpmg_scan(counts, c.gap, pi_time_of(c), c.noise, c.shots);
    Outcome out;
    out.fit = fit_if_requested(c, scan.difference.scan_values, scan.difference.signal);
    if (out.fit) {
        out.extras["one_over_e_pulses"] = out.fit->one_over_e_time();
        out.extras["one_over_e_uncertainty_pulses"] = out.fit->one_over_e_uncertainty();
    }
    out.tables.emplace_back("", scan_table(scan.difference));
    csv::Table closers({"scan_value", "signal_plus_x", "stderr_plus_x", "signal_minus_x", "stderr_minus_x"});
    for (std::size_t i = 0; i < counts.size(); ++i) {
        closers.add_row({scan.plus_x.scan_values[i], scan.plus_x.signal[i], scan.plus_x.std_error[i],
                         scan.minus_x.signal[i], scan.minus_x.std_error[i]});
    }
    out.tables.emplace_back("_closers", std::move(closers));
    return out;
}

Outcome run_xy16(const Config& c) {
    const double pi_time = pi_time_of(c);
    std::vector<double> pulses;
    for (long r = 1; r <= c.repeats; ++r) pulses.push_back(16.0 * static_cast<double>(r));
    const double gap = c.gap;
    auto xy16 = [pi_time, gap](double n) {
        return sequences::build_sequence(sequences::Xy16{static_cast<int>(std::lround(n / 16.0)), gap}, pi_time);
    };
    auto plain = [pi_time, gap](double n) {
        return sequences::build_sequence(sequences::PlainTrain{static_cast<int>(std::lround(n)), gap}, pi_time);
    };
    const auto rx = sequences::scan_sequences("xy16", pulses, xy16, c.noise, c.shots);
    const auto rp = sequences::scan_sequences("plain", pulses, plain, c.noise, c.shots);
    Outcome out;
    out.fit = fit_if_requested(c, rx.scan_values, rx.signal);
    out.extras["amplitude_error"] = c.noise.amplitude_error;
    out.extras["final_pulses"] = pulses.back();
    out.extras["final_xy16_signal"] = rx.signal.back();
    out.extras["final_plain_signal"] = rp.signal.back();
    out.tables.emplace_back("", scan_table(rx));
    out.tables.emplace_back("_plain", scan_table(rp));
    return out;
}

Outcome run_ensemble(const Config& c) {
    std::vector<int> rows = c.rows.empty() ? ensemble::middle_rows(c.geometry, std::min(4, c.geometry.rows)) : c.rows;
    auto options = c.ensemble_options;
    options.fit = false;
    const auto r = ensemble::ensemble_rabi(c.geometry, c.beam, rows, options);
    std::vector<std::string> header{"t"};
    for (const auto& [row, _] : r.row_signals) header.push_back("signal_row" + std::to_string(row));
    header.push_back("signal_mean");
    csv::Table t(header);
    for (std::size_t j = 0; j < r.times.size(); ++j) {
        std::vector<csv::Cell> cells{r.times[j]};
        for (const auto& [row, sig] : r.row_signals) cells.emplace_back(sig[j]);
        cells.emplace_back(r.mean_signal[j]);
        t.add_row(std::move(cells));
    }
    Outcome out;
    fitting::FitOptions fo;
    fo.frequency_hint = r.rabi_spread.mean / kTwoPi;
    out.fit = fit_if_requested(c, r.times, r.mean_signal, fo);
    out.extras["atoms"] = static_cast<long>(r.sites.size());
    out.extras["rabi_mean_hz"] = r.rabi_spread.mean / kTwoPi;
    out.extras["rabi_stddev_hz"] = r.rabi_spread.stddev / kTwoPi;
    out.extras["rabi_relative_spread"] = r.rabi_spread.mean > 0.0 ? r.rabi_spread.stddev / r.rabi_spread.mean : 0.0;
    out.tables.emplace_back("", std::move(t));
    return out;
}

Outcome run_idle_decay(const Config& c) {
    const double horizon = std::isfinite(c.noise.idle_t1) ? 3.0 * c.noise.idle_t1 : 1.0;
    const auto holds = linspace(0.0, c.max_hold.value_or(horizon), c.points);
    const auto rows = ensemble::idle_decay(c.noise.idle_t1, c.background_lifetime, holds);
    csv::Table t({"hold_s", "start0", "start1", "survival", "normalized_difference"});
    std::vector<double> diff;
    for (const auto& r : rows) {
        t.add_row({r.hold, r.start0, r.start1, r.survival, r.normalized_difference});
        diff.push_back(r.normalized_difference);
    }
    Outcome out;
    out.fit = fit_if_requested(c, holds, diff);
    if (out.fit) out.extras["t1_s"] = out.fit->one_over_e_time();
    out.tables.emplace_back("", std::move(t));
    return out;
}

csv::Table fig1e_table(const std::vector<conversion::Fig1eRow>& rows) {
    csv::Table t({"label", "gdd_fs2", "alpha_rad", "required_beta_rad", "reachable"});
    for (const auto& r : rows) {
        t.add_row({r.label, r.gdd_fs2, r.alpha, r.required_beta, std::string(r.reachable ? "true" : "false")});
    }
    return t;
}

Outcome run_fig1e(const Config& c) {
    const auto rows = conversion::fig1e_dataset(conversion::default_dispersive_setups(), c.qubit_frequency);
    Outcome out;
    ojson list = ojson::array();
    for (const auto& r : rows) {
        ojson o;
        o["label"] = r.label;
        o["alpha_rad"] = r.alpha;
        o["required_beta_rad"] = std::isfinite(r.required_beta) ? ojson(r.required_beta) : ojson(nullptr);
        o["reachable"] = r.reachable;
        list.push_back(std::move(o));
    }
    out.extras["rows"] = std::move(list);
    out.tables.emplace_back("", fig1e_table(rows));
    return out;
}

Outcome run_lightshift(const Config& c) {
    const auto field =
        lightshift::fictitious_field(c.polarization, c.intensity, c.laser_frequency, c.d1_frequency, c.d2_frequency);
    const auto cls = lightshift::transition_class(field, c.quantization_axis);
    Outcome out;
    out.extras["direction"] = {field.direction.x(), field.direction.y(), field.direction.z()};
    out.extras["class"] = lightshift::class_name(cls);
    out.extras["magnitude_scale"] = field.magnitude_scale;
    out.extras["detuning_factor"] = field.detuning_factor;
    csv::Table t({"direction_x", "direction_y", "direction_z", "magnitude_scale", "detuning_factor", "class"});
    t.add_row({field.direction.x(), field.direction.y(), field.direction.z(), field.magnitude_scale,
               field.detuning_factor, lightshift::class_name(cls)});
    out.tables.emplace_back("", std::move(t));
    return out;
}

Outcome run_tls(const Config& c) {
    const double beta = c.beta.value_or(conversion::optimize_beta(c.method, kTwoPi).beta_star);
    const auto raw = conversion::method_output_spectrum(c.method, beta, c.qubit_frequency).normalized();
    dynamics::ThreeLevelParams p;
    p.qubit_frequency = c.qubit_frequency;
    p.detuning = c.detuning;
    p.excited_linewidth = c.linewidth;
    p.harmonic = conversion::method_harmonic(c.method);
    p.spectrum = raw;
    const double eta = std::abs(spectrum::lag_overlap(raw, p.harmonic));
    if (!(eta > 0.0)) throw DegenerateInputError("tls: spectrum has no Raman coupling");
    p.spectrum = raw.with_power_scale(2.0 * std::abs(c.detuning) * c.rabi_frequency / eta);
    dynamics::EvolveOptions eo;
    eo.samples = static_cast<std::size_t>(c.samples);
    const double predicted = dynamics::raman_rabi_frequency(p);
    const auto tr = dynamics::evolve_tls(p, c.periods * kTwoPi / predicted, dynamics::QubitState(1.0, 0.0), eo);
    const auto p1 = tr.population(1);
    Outcome out;
    fitting::FitOptions fo;
    fo.frequency_hint = predicted / kTwoPi;
    out.fit = fit_if_requested(c, tr.times, p1, fo);
    out.extras["method"] = conversion::method_name(c.method);
    out.extras["beta_rad"] = beta;
    out.extras["am_efficiency"] = eta;
    out.extras["predicted_rabi_hz"] = predicted / kTwoPi;
    if (out.fit && c.fit_model == "damped_cosine") {
        const double measured = out.fit->param("frequency");
        out.extras["measured_rabi_hz"] = measured;
        out.extras["relative_error"] = measured / (predicted / kTwoPi) - 1.0;
    }
    if (c.linewidth > 0.0) {
        const auto sc = dynamics::scattering_figures(p);
        out.extras["scatter_rate_per_s"] = sc.gamma_sc;
        out.extras["pi_pulses_per_scatter"] = sc.pi_pulses_per_scatter;
    }
    csv::Table t({"t", "p0", "p1", "p2", "re_coh", "im_coh"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& pop = tr.populations[i];
        t.add_row({tr.times[i], pop[0], pop[1], pop[2], tr.coherences[i].real(), tr.coherences[i].imag()});
    }
    out.tables.emplace_back("", std::move(t));
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ConfigurationError*>(&error)) return kExitConfig;
    if (dynamic_cast<const json::exception*>(&error)) return kExitConfig;
    if (dynamic_cast<const IoError*>(&error)) return kExitIo;
    if (dynamic_cast<const fs::filesystem_error*>(&error)) return kExitIo;
    return kExitNumeric;
}

fs::path default_output_root() {
    const char* env = std::getenv("RAMANFORGE_OUT_DIR");
    if (env && *env) return fs::path(env);
    return fs::path(".");
}

std::vector<TableS1Row> table_s1_rows(const TableS1Options& options) {
    if (!(options.beta_max > 0.0 && options.beta_max <= kTwoPi)) {
        throw ConfigurationError("beta-max must lie in (0, 2pi]");
    }
    if (!(options.dispersive_alpha > 0.0 && options.dispersive_alpha < kPi)) {
        throw ConfigurationError("alpha must lie in (0, pi)");
    }
    std::vector<conversion::ConversionMethod> methods{
        conversion::FilterCarrier{}, conversion::FilterMachZehnderInterferometer{},
        conversion::MZModulatorHalfTransmission{}, conversion::MZModulatorMinTransmission{},
        conversion::Dispersive{options.dispersive_alpha}};
    std::vector<TableS1Row> rows;
    for (const auto& m : methods) {
        const auto opt = conversion::optimize_beta(m, options.beta_max);
        rows.push_back({conversion::method_name(m), opt.beta_star, opt.report});
    }
    const auto joint = conversion::optimize_dispersive_joint(std::min(options.beta_max, kPi));
    rows.push_back({"dispersive_joint", joint.beta, joint.report});
    return rows;
}

std::vector<fs::path> cmd_table_s1(const fs::path& out_dir, const TableS1Options& options) {
    const auto rows = table_s1_rows(options);
    csv::Table table({"method", "beta_star", "T", "eta", "C"});
    csv::Table dispersive({"variant", "beta", "alpha", "argument", "T", "eta", "C"});
    for (const auto& r : rows) {
        table.add_row({r.method, r.beta_star, r.report.transmission, r.report.am_eff, r.report.coherence});
        if (r.report.alpha) {
            const double alpha = *r.report.alpha;
            dispersive.add_row({r.method, r.beta_star, alpha, 2.0 * r.beta_star * std::sin(alpha),
                                r.report.transmission, r.report.am_eff, r.report.coherence});
        }
    }
    if (!(options.sweep_step > 0.0)) throw ConfigurationError("sweep step must be > 0");
    std::vector<double> betas;
    for (long i = 1;; ++i) {
        const double b = options.sweep_step * static_cast<double>(i);
        if (b > options.beta_max * (1.0 + 1e-12)) break;
        betas.push_back(std::min(b, options.beta_max));
    }
    std::vector<conversion::ConversionMethod> methods = conversion::table_methods();
    methods.back() = conversion::Dispersive{options.dispersive_alpha};
    csv::Table sweep({"method", "beta", "alpha", "T", "eta", "C"});
    for (const auto& s : conversion::method_sweep(methods, betas)) {
        csv::Cell alpha = s.report.alpha ? csv::Cell(*s.report.alpha) : csv::Cell(std::string());
        sweep.add_row({s.method, s.report.beta, alpha, s.report.transmission, s.report.am_eff, s.report.coherence});
    }
    const std::vector<fs::path> paths{out_dir / "table_s1.csv", out_dir / "table_s1_sweep.csv",
                                      out_dir / "table_s1_dispersive.csv"};
    csv::write_table(paths[0], table);
    csv::write_table(paths[1], sweep);
    csv::write_table(paths[2], dispersive);
    return paths;
}

std::vector<fs::path> cmd_fig1e(const fs::path& out_dir, double qubit_frequency) {
    if (!(qubit_frequency > 0.0)) throw ConfigurationError("qubit frequency must be > 0");
    const auto rows = conversion::fig1e_dataset(conversion::default_dispersive_setups(), qubit_frequency);
    const fs::path path = out_dir / "fig1e.csv";
    csv::write_table(path, fig1e_table(rows));
    return {path};
}

std::vector<double> fig2b_grid(int points) {
    if (points < 2) throw ConfigurationError("fig2b: need at least 2 grid points");
    std::vector<double> betas(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k) betas[static_cast<std::size_t>(k - 1)] = kPi * k / points;
    betas.back() = kPi;
    return betas;
}

std::vector<double> fig2b_curve(std::span<const double> betas, double alpha) {
    if (!(alpha > 0.0 && alpha < kPi)) throw ConfigurationError("fig2b: alpha must lie in (0, pi)");
    std::vector<double> eff;
    eff.reserve(betas.size());
    for (double beta : betas) {
        if (!(beta > 0.0 && beta <= kPi)) throw ConfigurationError("fig2b: beta grid must lie within (0, pi]");
        const auto pm = spectrum::phase_modulate(beta, 1.0, special::default_truncation(beta));
        eff.push_back(spectrum::am_efficiency(spectrum::apply_quadratic_phase(pm, alpha), 1));
    }
    return eff;
}

std::vector<fs::path> cmd_fig2b(const fs::path& out_dir, double alpha, int points) {
    const auto betas = fig2b_grid(points);
    const auto eff = fig2b_curve(betas, alpha);
    csv::Table t({"beta", "am_efficiency"});
    for (std::size_t i = 0; i < betas.size(); ++i) t.add_row({betas[i], eff[i]});
    const fs::path path = out_dir / "fig2b.csv";
    csv::write_table(path, t);
    return {path};
}

json load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigurationError("config: malformed JSON: " + std::string(e.what()));
    }
}

std::string summary_text(const ojson& summary) { return summary.dump(2) + "\n"; }

RunOutput run_experiment(const json& config, const RunOverrides& overrides) {
    if (!config.is_object()) throw ConfigurationError("config: expected a JSON object");
    const Config c = parse_config(config, overrides);

    Outcome outcome;
    if (c.simulation == "rabi") outcome = run_rabi(c);
    else if (c.simulation == "ramsey") outcome = run_ramsey(c);
    else if (c.simulation == "cpmg") outcome = run_cpmg(c);
    else if (c.simulation == "xy16") outcome = run_xy16(c);
    else if (c.simulation == "ensemble") outcome = run_ensemble(c);
    else if (c.simulation == "idle_decay") outcome = run_idle_decay(c);
    else if (c.simulation == "fig1e") outcome = run_fig1e(c);
    else if (c.simulation == "lightshift") outcome = run_lightshift(c);
    else outcome = run_tls(c);

    const fs::path dir = c.out_dir.value_or(default_output_root());
    RunOutput result;
    std::vector<std::string> file_names;
    for (const auto& [suffix, table] : outcome.tables) {
        const fs::path path = dir / (c.label + suffix + ".csv");
        csv::write_table(path, table);
        result.files.push_back(path);
        file_names.push_back(path.filename().string());
    }

    ojson s;
    s["schema_version"] = kSchemaVersion;
    s["label"] = c.label;
    s["simulation"] = c.simulation;
    s["fit_model"] = outcome.fit ? fitting::model_name(outcome.fit->model) : std::string("none");
    if (outcome.fit) {
        const auto names = fitting::parameter_names(outcome.fit->model);
        s["params"] = numbers_json(names, outcome.fit->params);
        s["uncertainties"] = numbers_json(names, outcome.fit->uncertainties);
        s["residual_rms"] = outcome.fit->residual_rms;
    } else {
        s["params"] = ojson::object();
        s["uncertainties"] = ojson::object();
    }
    s["shots"] = c.shots;
    s["seed"] = c.seed;
    s["files"] = file_names;
    for (auto& item : outcome.extras.items()) s[item.key()] = item.value();
    result.summary = s;

    const fs::path summary_path = dir / (c.label + "_summary.json");
    csv::write_file(summary_path, summary_text(s));
    result.files.push_back(summary_path);

    ojson meta;
    meta["schema_version"] = kSchemaVersion;
    meta["label"] = c.label;
    meta["created_utc"] = utc_timestamp();
    meta["kernel_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
    const fs::path meta_path = dir / (c.label + "_meta.json");
    csv::write_file(meta_path, meta.dump(2) + "\n");
    result.files.push_back(meta_path);
    return result;
}

}  // namespace ramanforge::cli
