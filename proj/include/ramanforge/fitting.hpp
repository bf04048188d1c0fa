#pragma once

// Levenberg-Marquardt least squares for the decay and oscillation models used
// to summarize simulated signals.
//
//   exponential    A exp(-x / tau) + c                      1/e time: tau
//   gaussian       A exp(-x^2 / (2 s^2)) + c                1/e time: sqrt(2) s
//   damped_cosine  c + A exp(-gamma x) cos(2 pi f x + phi)  1/e time: 1 / gamma
//   thermal        A / sqrt(1 + (x / tau)^2) + c            1/e time: tau sqrt(e^2 - 1)

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ramanforge::fitting {

enum class DecayModel { Exponential, Gaussian, DampedCosine, Thermal };

std::string model_name(DecayModel model);
// Throws ConfigurationError for unknown names.
DecayModel model_from_name(const std::string& name);
std::vector<std::string> parameter_names(DecayModel model);

struct FitResult {
    DecayModel model = DecayModel::Exponential;
    std::vector<double> params;
    std::vector<double> uncertainties;  // 1-sigma, from the scaled covariance
    double residual_rms = 0.0;
    int iterations = 0;

    double param(const std::string& name) const;
    double uncertainty(const std::string& name) const;
    // Time at which the decay envelope falls to 1/e of its initial value.
    double one_over_e_time() const;
    double one_over_e_uncertainty() const;
};

double evaluate(DecayModel model, std::span<const double> params, double x);

struct FitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-9;
    std::optional<std::vector<double>> initial;  // overrides the built-in guess
    std::optional<double> frequency_hint;        // damped_cosine only, cycles per x unit
    bool check_range = true;                      // require ys in [-0.1, 1.1]
};

// Requires at least 5 points, equal lengths and finite data. Throws FitError
// if the relative parameter step does not fall below the tolerance within
// max_iterations.
FitResult fit_decay(std::span<const double> xs, std::span<const double> ys, DecayModel model,
                    const FitOptions& options = {});

// Frequency (cycles per x unit) of the largest periodogram peak of the
// mean-removed samples, searched up to the mean-spacing Nyquist limit.
double dominant_frequency(std::span<const double> xs, std::span<const double> ys);

}  // namespace ramanforge::fitting
