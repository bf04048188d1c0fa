#include "ramanforge/array_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "ramanforge/errors.hpp"
#include "ramanforge/kernels.hpp"
#include "ramanforge/random.hpp"

namespace ramanforge::ensemble {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_options(const EnsembleOptions& o) {
    if (!(o.duration > 0.0)) throw ConfigurationError("ensemble: duration must be > 0");
    if (o.samples < 2) throw ConfigurationError("ensemble: need at least 2 samples");
    if (!(o.power_sigma >= 0.0)) throw ConfigurationError("ensemble: power sigma must be >= 0");
    if (o.power_sigma > 0.0 && o.power_shots < 1) throw ConfigurationError("ensemble: power shots must be >= 1");
}

// Each Rabi frequency repeated once per power-fluctuation quantile.
std::vector<double> frequency_bank(std::span<const double> rabis, const EnsembleOptions& o) {
    if (o.power_sigma == 0.0) return {rabis.begin(), rabis.end()};
    std::vector<double> bank;
    bank.reserve(rabis.size() * static_cast<std::size_t>(o.power_shots));
    for (double r : rabis) {
        for (int k = 0; k < o.power_shots; ++k) {
            const double u = (k + 0.5) / o.power_shots;
            bank.push_back(r * (1.0 + o.power_sigma * rng::normal_quantile(u)));
        }
    }
    return bank;
}

std::vector<std::complex<double>> mean_phasor(std::span<const double> rabis, const EnsembleOptions& o) {
    const auto bank = frequency_bank(rabis, o);
    std::vector<std::complex<double>> out(o.samples);
    const double dt = o.duration / static_cast<double>(o.samples - 1);
    kernels::phasor_mean(bank, dt, out);
    return out;
}

std::vector<double> flop_signal(const std::vector<std::complex<double>>& phasor) {
    std::vector<double> s(phasor.size());
    for (std::size_t j = 0; j < phasor.size(); ++j) s[j] = 0.5 * (1.0 - phasor[j].real());
    return s;
}

}  // namespace

void validate(const ArrayGeometry& g) {
    if (g.rows < 1 || g.cols < 1) throw ConfigurationError("array: rows and cols must be >= 1");
    if (!(g.pitch_x > 0.0) || !(g.pitch_y > 0.0)) throw ConfigurationError("array: pitches must be > 0");
    if (!(g.fill_probability >= 0.0 && g.fill_probability <= 1.0)) {
        throw ConfigurationError("array: fill probability must lie in [0, 1]");
    }
    if (g.mask && g.mask->size() != static_cast<std::size_t>(g.rows) * static_cast<std::size_t>(g.cols)) {
        throw ConfigurationError("array: mask size must equal rows * cols");
    }
}

void validate(const BeamProfile& b) {
    if (!(b.waist_minor > 0.0) || !(b.waist_major > 0.0)) throw ConfigurationError("beam: waists must be > 0");
    if (!(b.peak_rabi >= 0.0) || !std::isfinite(b.peak_rabi)) throw ConfigurationError("beam: peak Rabi must be >= 0");
    if (!std::isfinite(b.offset_u) || !std::isfinite(b.offset_v)) throw ConfigurationError("beam: offsets must be finite");
}

std::vector<SiteRabi> per_atom_rabi(const ArrayGeometry& g, const BeamProfile& b) {
    validate(g);
    validate(b);
    std::vector<SiteRabi> sites;
    const double u = -b.offset_u;
    const double out_of_plane = 2.0 * u * u / (b.waist_minor * b.waist_minor);
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * static_cast<std::size_t>(g.cols) + static_cast<std::size_t>(c);
            bool filled = true;
            if (g.mask) {
                filled = (*g.mask)[idx];
            } else if (g.fill_probability < 1.0) {
                rng::Engine e = rng::make_engine(g.fill_seed, 0x66696c6cULL, idx);
                filled = rng::uniform_open(e) < g.fill_probability;
            }
            if (!filled) continue;
            SiteRabi s;
            s.row = r;
            s.col = c;
            s.x = (c - 0.5 * (g.cols - 1)) * g.pitch_x;
            s.y = (r - 0.5 * (g.rows - 1)) * g.pitch_y;
            const double v = s.y - b.offset_v;
            s.rabi = b.peak_rabi * std::exp(-out_of_plane - 2.0 * v * v / (b.waist_major * b.waist_major));
            sites.push_back(s);
        }
    }
    return sites;
}

SpreadStats spread(std::span<const double> rabis) {
    if (rabis.empty()) throw DegenerateInputError("spread: no atoms");
    SpreadStats s;
    const double n = static_cast<double>(rabis.size());
    s.mean = std::accumulate(rabis.begin(), rabis.end(), 0.0) / n;
    double ss = 0.0;
    for (double r : rabis) ss += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(ss / n);
    const auto [lo, hi] = std::minmax_element(rabis.begin(), rabis.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::vector<int> middle_rows(const ArrayGeometry& g, int count) {
    validate(g);
    if (count < 1 || count > g.rows) throw ConfigurationError("middle_rows: count must lie in [1, rows]");
    const int start = (g.rows - count) / 2;
    std::vector<int> rows(static_cast<std::size_t>(count));
    std::iota(rows.begin(), rows.end(), start);
    return rows;
}

EnsembleResult ensemble_from_rabis(std::span<const double> rabis, const EnsembleOptions& o) {
    check_options(o);
    if (rabis.empty()) throw DegenerateInputError("ensemble: no atoms selected");
    EnsembleResult r;
    r.times.resize(o.samples);
    for (std::size_t j = 0; j < o.samples; ++j) {
        r.times[j] = o.duration * static_cast<double>(j) / static_cast<double>(o.samples - 1);
    }
    const auto phasor = mean_phasor(rabis, o);
    r.mean_signal = flop_signal(phasor);
    r.envelope.resize(phasor.size());
    std::transform(phasor.begin(), phasor.end(), r.envelope.begin(), [](auto p) { return std::abs(p); });
    r.rabi_spread = spread(rabis);
    if (o.fit && r.rabi_spread.mean > 0.0) {
        fitting::FitOptions fo;
        fo.frequency_hint = r.rabi_spread.mean / kTwoPi;
        r.fit = fitting::fit_decay(r.times, r.mean_signal, fitting::DecayModel::DampedCosine, fo);
        r.fitted_frequency_hz = r.fit->param("frequency");
    }
    return r;
}

EnsembleResult ensemble_rabi(const ArrayGeometry& g, const BeamProfile& b, std::span<const int> row_selection,
                             const EnsembleOptions& o) {
    check_options(o);
    auto sites = per_atom_rabi(g, b);
    std::vector<int> rows(row_selection.begin(), row_selection.end());
    if (rows.empty()) {
        rows.resize(static_cast<std::size_t>(g.rows));
        std::iota(rows.begin(), rows.end(), 0);
    }
    for (int row : rows) {
        if (row < 0 || row >= g.rows) throw ConfigurationError("ensemble: selected row outside the array");
    }
    std::vector<SiteRabi> selected;
    for (const auto& s : sites) {
        if (std::find(rows.begin(), rows.end(), s.row) != rows.end()) selected.push_back(s);
    }
    std::vector<double> rabis(selected.size());
    std::transform(selected.begin(), selected.end(), rabis.begin(), [](const SiteRabi& s) { return s.rabi; });
    EnsembleResult r = ensemble_from_rabis(rabis, o);
    r.sites = std::move(selected);
    for (int row : rows) {
        std::vector<double> row_rabis;
        for (const auto& s : r.sites) {
            if (s.row == row) row_rabis.push_back(s.rabi);
        }
        if (!row_rabis.empty()) r.row_signals[row] = flop_signal(mean_phasor(row_rabis, o));
    }
    return r;
}

std::vector<IdleDecayRow> idle_decay(double t1, double lifetime, std::span<const double> holds) {
    if (!(t1 > 0.0) || !(lifetime > 0.0)) throw ConfigurationError("idle_decay: t1 and lifetime must be > 0");
    std::vector<IdleDecayRow> rows;
    rows.reserve(holds.size());
    for (double h : holds) {
        if (!(h >= 0.0)) throw ConfigurationError("idle_decay: hold times must be >= 0");
        IdleDecayRow r;
        r.hold = h;
        r.survival = std::isfinite(lifetime) ? std::exp(-h / lifetime) : 1.0;
        r.normalized_difference = std::isfinite(t1) ? std::exp(-h / t1) : 1.0;
        r.start0 = r.survival * 0.5 * (1.0 - r.normalized_difference);
        r.start1 = r.survival * 0.5 * (1.0 + r.normalized_difference);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ramanforge::ensemble
