#include "ramanforge/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "ramanforge/errors.hpp"
#include "ramanforge/optimize.hpp"

namespace ramanforge::fitting {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t param_count(DecayModel model) {
    return model == DecayModel::DampedCosine ? 5 : 3;
}

// Model value and gradient with respect to the parameters.
double value_and_gradient(DecayModel model, const Eigen::VectorXd& p, double x, Eigen::Ref<Eigen::RowVectorXd> g) {
    switch (model) {
        case DecayModel::Exponential: {
            const double e = std::exp(-x / p[1]);
            g[0] = e;
            g[1] = p[0] * e * x / (p[1] * p[1]);
            g[2] = 1.0;
            return p[0] * e + p[2];
        }
        case DecayModel::Gaussian: {
            const double s2 = p[1] * p[1];
            const double e = std::exp(-x * x / (2.0 * s2));
            g[0] = e;
            g[1] = p[0] * e * x * x / (s2 * p[1]);
            g[2] = 1.0;
            return p[0] * e + p[2];
        }
        case DecayModel::Thermal: {
            const double u = x / p[1];
            const double q = 1.0 + u * u;
            const double r = 1.0 / std::sqrt(q);
            g[0] = r;
            g[1] = p[0] * u * u / (p[1] * q) * r;
            g[2] = 1.0;
            return p[0] * r + p[2];
        }
        case DecayModel::DampedCosine: {
            const double e = std::exp(-p[2] * x);
            const double arg = kTwoPi * p[3] * x + p[4];
            const double c = std::cos(arg), s = std::sin(arg);
            g[0] = 1.0;
            g[1] = e * c;
            g[2] = -x * p[1] * e * c;
            g[3] = -kTwoPi * x * p[1] * e * s;
            g[4] = -p[1] * e * s;
            return p[0] + p[1] * e * c;
        }
    }
    return 0.0;
}

double tail_mean(std::span<const double> ys) {
    const std::size_t n = std::max<std::size_t>(1, ys.size() / 10);
    return std::accumulate(ys.end() - static_cast<long>(n), ys.end(), 0.0) / static_cast<double>(n);
}

// x where |y - c| first drops below |A| * level, linearly interpolated.
double crossing(std::span<const double> xs, std::span<const double> ys, double c, double amp, double level) {
    const double target = std::abs(amp) * level;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double a = std::abs(ys[i - 1] - c), b = std::abs(ys[i] - c);
        if (a >= target && b < target) {
            const double f = (a - target) / (a - b);
            return xs[i - 1] + f * (xs[i] - xs[i - 1]);
        }
    }
    return 0.5 * (xs.back() - xs.front());
}

std::vector<double> initial_guess(std::span<const double> xs, std::span<const double> ys, DecayModel model,
                                  const FitOptions& options) {
    const double span = xs.back() - xs.front();
    if (model == DecayModel::DampedCosine) {
        const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        const double f = options.frequency_hint ? *options.frequency_hint : dominant_frequency(xs, ys);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            acc += (ys[i] - mean) * std::polar(1.0, -kTwoPi * f * xs[i]);
        }
        const double amp = 2.0 * std::abs(acc) / static_cast<double>(xs.size());
        return {mean, amp, 0.0, f, std::arg(acc)};
    }
    const double c = tail_mean(ys);
    const double amp = ys.front() - c;
    double scale = 0.0;
    switch (model) {
        case DecayModel::Exponential:
            scale = crossing(xs, ys, c, amp, std::exp(-1.0));
            break;
        case DecayModel::Gaussian:
            scale = crossing(xs, ys, c, amp, std::exp(-1.0)) / std::numbers::sqrt2;
            break;
        case DecayModel::Thermal:
            scale = crossing(xs, ys, c, amp, std::exp(-1.0)) / std::sqrt(std::exp(2.0) - 1.0);
            break;
        default:
            break;
    }
    if (!(scale > 0.0)) scale = span / 3.0;
    return {amp, scale, c};
}

void normalize(FitResult& r) {
    switch (r.model) {
        case DecayModel::Exponential:
            break;
        case DecayModel::Gaussian:
        case DecayModel::Thermal:
            r.params[1] = std::abs(r.params[1]);
            break;
        case DecayModel::DampedCosine:
            if (r.params[3] < 0.0) {
                r.params[3] = -r.params[3];
                r.params[4] = -r.params[4];
            }
            if (r.params[1] < 0.0) {
                r.params[1] = -r.params[1];
                r.params[4] += std::numbers::pi;
            }
            r.params[4] = std::remainder(r.params[4], kTwoPi);
            break;
    }
}

}  // namespace

std::string model_name(DecayModel model) {
    switch (model) {
        case DecayModel::Exponential: return "exponential";
        case DecayModel::Gaussian: return "gaussian";
        case DecayModel::DampedCosine: return "damped_cosine";
        case DecayModel::Thermal: return "thermal";
    }
    return "unknown";
}

DecayModel model_from_name(const std::string& name) {
    if (name == "exponential") return DecayModel::Exponential;
    if (name == "gaussian") return DecayModel::Gaussian;
    if (name == "damped_cosine") return DecayModel::DampedCosine;
    if (name == "thermal") return DecayModel::Thermal;
    throw ConfigurationError("unknown fit model '" + name + "'");
}

std::vector<std::string> parameter_names(DecayModel model) {
    switch (model) {
        case DecayModel::Exponential: return {"amplitude", "tau", "offset"};
        case DecayModel::Gaussian: return {"amplitude", "sigma", "offset"};
        case DecayModel::Thermal: return {"amplitude", "tau", "offset"};
        case DecayModel::DampedCosine: return {"offset", "amplitude", "gamma", "frequency", "phase"};
    }
    return {};
}

double FitResult::param(const std::string& name) const {
    const auto names = parameter_names(model);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigurationError("fit parameter '" + name + "' not in model");
    return params[static_cast<std::size_t>(it - names.begin())];
}

double FitResult::uncertainty(const std::string& name) const {
    const auto names = parameter_names(model);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigurationError("fit parameter '" + name + "' not in model");
    return uncertainties[static_cast<std::size_t>(it - names.begin())];
}

double FitResult::one_over_e_time() const {
    switch (model) {
        case DecayModel::Exponential: return params[1];
        case DecayModel::Gaussian: return std::numbers::sqrt2 * params[1];
        case DecayModel::Thermal: return params[1] * std::sqrt(std::exp(2.0) - 1.0);
        case DecayModel::DampedCosine: return 1.0 / params[2];
    }
    return 0.0;
}

double FitResult::one_over_e_uncertainty() const {
    switch (model) {
        case DecayModel::Exponential: return uncertainties[1];
        case DecayModel::Gaussian: return std::numbers::sqrt2 * uncertainties[1];
        case DecayModel::Thermal: return uncertainties[1] * std::sqrt(std::exp(2.0) - 1.0);
        case DecayModel::DampedCosine: return uncertainties[2] / (params[2] * params[2]);
    }
    return 0.0;
}

double evaluate(DecayModel model, std::span<const double> params, double x) {
    if (params.size() != param_count(model)) throw ConfigurationError("evaluate: wrong parameter count");
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(params.data(), static_cast<long>(params.size()));
    Eigen::RowVectorXd g(p.size());
    return value_and_gradient(model, p, x, g);
}

double dominant_frequency(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 3) throw DomainError("dominant_frequency: need >= 3 samples");
    const double span = xs.back() - xs.front();
    if (!(span > 0.0)) throw DomainError("dominant_frequency: samples must span a positive range");
    const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    auto power = [&](double f) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            acc += (ys[i] - mean) * std::polar(1.0, -kTwoPi * f * xs[i]);
        }
        return std::norm(acc);
    };
    const double nyquist = 0.5 * static_cast<double>(xs.size() - 1) / span;
    const double step = 0.25 / span;
    const auto best = optimize::scan_and_refine(power, step, nyquist, step, 1e-9 * nyquist);
    return best.x;
}

FitResult fit_decay(std::span<const double> xs, std::span<const double> ys, DecayModel model,
                    const FitOptions& options) {
    if (xs.size() != ys.size()) throw DomainError("fit_decay: xs and ys differ in length");
    if (xs.size() < 5) throw DomainError("fit_decay: need at least 5 points");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw DomainError("fit_decay: non-finite data");
        if (options.check_range && (ys[i] < -0.1 || ys[i] > 1.1)) {
            throw DomainError("fit_decay: ys outside [-0.1, 1.1]");
        }
    }
    const long n = static_cast<long>(xs.size());
    const long m = static_cast<long>(param_count(model));
    std::vector<double> guess = options.initial ? *options.initial : initial_guess(xs, ys, model, options);
    if (static_cast<long>(guess.size()) != m) throw ConfigurationError("fit_decay: wrong initial parameter count");

    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(guess.data(), m);
    Eigen::MatrixXd jac(n, m);
    Eigen::VectorXd res(n);

    auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* jacobian) {
        Eigen::RowVectorXd g(m);
        for (long i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            r[i] = value_and_gradient(model, q, xs[ui], g) - ys[ui];
            if (jacobian) jacobian->row(i) = g;
        }
        return r.squaredNorm();
    };

    double cost = residuals(p, res, &jac);
    double lambda = 1e-3;
    Eigen::VectorXd trial_res(n);
    int iter = 0;
    bool converged = false;
    while (iter < options.max_iterations) {
        ++iter;
        Eigen::VectorXd d = jac.colwise().norm().transpose();
        for (long j = 0; j < m; ++j) {
            if (!(d[j] > 0.0)) d[j] = 1.0;
        }
        const Eigen::MatrixXd js = jac * d.cwiseInverse().asDiagonal();
        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd aug(n + m, m);
            aug.topRows(n) = js;
            aug.bottomRows(m) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(m, m);
            Eigen::VectorXd rhs(n + m);
            rhs.head(n) = -res;
            rhs.tail(m).setZero();
            const Eigen::VectorXd step = aug.colPivHouseholderQr().solve(rhs).cwiseQuotient(d);
            const Eigen::VectorXd trial = p + step;
            const double trial_cost = residuals(trial, trial_res, nullptr);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const double rel = step.cwiseProduct(d).norm() / (p.cwiseProduct(d).norm() + 1e-300);
                p = trial;
                cost = residuals(p, res, &jac);
                lambda = std::max(lambda * 0.1, 1e-15);
                accepted = true;
                if (rel < options.step_tolerance) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e16) {
                    // No downhill step exists at working precision.
                    accepted = true;
                    converged = true;
                }
            }
        }
        if (converged) break;
    }
    const double rms = std::sqrt(cost / static_cast<double>(n));
    if (!converged) throw FitError("fit_decay: no convergence for " + model_name(model), rms, iter);

    FitResult r;
    r.model = model;
    r.params.assign(p.data(), p.data() + m);
    r.iterations = iter;
    r.residual_rms = rms;
    r.uncertainties.assign(static_cast<std::size_t>(m), 0.0);
    if (n > m) {
        Eigen::VectorXd d = jac.colwise().norm().transpose();
        for (long j = 0; j < m; ++j) {
            if (!(d[j] > 0.0)) d[j] = 1.0;
        }
        const Eigen::MatrixXd js = jac * d.cwiseInverse().asDiagonal();
        const Eigen::MatrixXd normal = js.transpose() * js;
        const Eigen::MatrixXd inv = normal.completeOrthogonalDecomposition().pseudoInverse();
        const double s2 = cost / static_cast<double>(n - m);
        for (long j = 0; j < m; ++j) {
            r.uncertainties[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, s2 * inv(j, j))) / d[j];
        }
    }
    normalize(r);
    return r;
}

}  // namespace ramanforge::fitting
