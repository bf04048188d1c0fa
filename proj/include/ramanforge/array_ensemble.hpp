#pragma once

// Tweezer array under an elliptical Gaussian Raman beam. The atoms sit in the
// x-y plane (x along a row, y across rows). The beam's minor waist lies out of
// the atom plane and its major waist spans the rows, so the local Raman Rabi
// frequency, proportional to intensity, is
//   Omega(site) = peak * exp(-2 u^2 / w_minor^2 - 2 v^2 / w_major^2)
// with u = -offset_u (out of plane) and v = y - offset_v.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ramanforge/fitting.hpp"

namespace ramanforge::ensemble {

struct ArrayGeometry {
    int rows = 20;
    int cols = 30;
    double pitch_x = 200e-6 / 29.0;  // m, spacing along a row
    double pitch_y = 100e-6 / 19.0;  // m, spacing between rows
    double fill_probability = 1.0;
    std::uint64_t fill_seed = 0;
    std::optional<std::vector<bool>> mask;  // rows * cols, row-major; overrides fill_probability
};

struct BeamProfile {
    double waist_minor = 40e-6;   // m
    double waist_major = 560e-6;  // m
    double offset_u = 0.0;        // m, beam center above the atom plane
    double offset_v = 0.0;        // m, beam center across the rows
    double peak_rabi = 0.0;       // rad/s
};

void validate(const ArrayGeometry& geom);
void validate(const BeamProfile& beam);

struct SiteRabi {
    int row = 0;
    int col = 0;
    double x = 0.0;
    double y = 0.0;
    double rabi = 0.0;  // rad/s
};

// Occupied sites in row-major order.
std::vector<SiteRabi> per_atom_rabi(const ArrayGeometry& geom, const BeamProfile& beam);

struct SpreadStats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SpreadStats spread(std::span<const double> rabis);

struct EnsembleOptions {
    double duration = 5e-6;       // s
    std::size_t samples = 1001;   // uniform grid including t = 0 and duration
    double power_sigma = 0.0;     // fractional rms of a shot-to-shot global Rabi scale
    int power_shots = 64;         // quantile draws used when power_sigma > 0
    bool fit = true;
};

struct EnsembleResult {
    std::vector<SiteRabi> sites;
    std::vector<double> times;
    std::map<int, std::vector<double>> row_signals;  // |1> population averaged over each selected row
    std::vector<double> mean_signal;                  // averaged over all selected atoms
    std::vector<double> envelope;                     // |<exp(i Omega t)>|
    SpreadStats rabi_spread;
    std::optional<fitting::FitResult> fit;             // damped cosine of mean_signal
    double fitted_frequency_hz = 0.0;
};

// Rabi flopping p1 = (1 - cos(Omega t)) / 2 averaged over the atoms of the
// selected rows (all rows when the selection is empty).
EnsembleResult ensemble_rabi(const ArrayGeometry& geom, const BeamProfile& beam, std::span<const int> row_selection,
                             const EnsembleOptions& options = {});

// Same average for an explicit bank of Rabi frequencies.
EnsembleResult ensemble_from_rabis(std::span<const double> rabis, const EnsembleOptions& options = {});

// The count consecutive rows centered in the array.
std::vector<int> middle_rows(const ArrayGeometry& geom, int count = 4);

struct IdleDecayRow {
    double hold = 0.0;       // s
    double start0 = 0.0;     // |1> population of present atoms prepared in |0>, times survival
    double start1 = 0.0;     // same, prepared in |1>
    double survival = 0.0;   // exp(-hold / background_lifetime)
    double normalized_difference = 0.0;  // (start1 - start0) / survival = exp(-hold / t1)
};

// Population mixing at rate 1/t1 toward 1/2 and atom loss at rate 1/lifetime.
// Infinite t1 or lifetime switch the corresponding process off.
std::vector<IdleDecayRow> idle_decay(double t1, double background_lifetime, std::span<const double> holds);

}  // namespace ramanforge::ensemble
