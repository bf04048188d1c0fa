#pragma once

// Adaptive Dormand-Prince 5(4) integration of complex linear or nonlinear
// ODEs dy/dt = f(t, y) with fixed-size Eigen state vectors. Output is produced
// on caller-supplied times through the method's fourth-order dense output, so
// the step size is set by the error tolerance alone.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanforge/errors.hpp"

namespace ramanforge::ode {

template <int N>
using State = Eigen::Matrix<std::complex<double>, N, 1>;

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double initial_step = 0.0;  // 0 selects a step from the derivative scale
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 200'000'000;
};

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
};

namespace detail {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail

// Integrates from t0 and returns the state at every entry of times (which must
// be sorted and >= t0). Throws IntegrationError when the step underflows or
// the step budget is exhausted.
template <int N, class Rhs>
std::vector<State<N>> integrate(Rhs&& f, const State<N>& y0, double t0, std::span<const double> times,
                                const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
    using namespace detail;
    std::vector<State<N>> out;
    out.reserve(times.size());
    if (times.empty()) return out;
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < t0) {
        throw ConfigurationError("integrate: output times must be sorted and not before t0");
    }
    const double t_end = times.back();
    std::size_t next = 0;
    while (next < times.size() && times[next] == t0) {
        out.push_back(y0);
        ++next;
    }
    if (next == times.size()) return out;

    State<N> y = y0;
    double t = t0;
    State<N> k1 = f(t, y);
    double h = opt.initial_step;
    if (!(h > 0.0)) {
        const double ynorm = y.norm();
        const double dnorm = k1.norm();
        h = (ynorm > 0.0 && dnorm > 0.0) ? 1e-3 * ynorm / dnorm : 1e-6 * (t_end - t0);
        h = std::min({h, opt.max_step, t_end - t0});
        if (!(h > 0.0)) h = 1e-6 * (t_end - t0);
    }

    IntegratorStats local;
    State<N> k2, k3, k4, k5, k6, k7, y_new, err;
    while (next < times.size()) {
        if (local.accepted + local.rejected >= opt.max_steps) {
            throw IntegrationError("integrate: step budget exhausted", t, h);
        }
        h = std::min({h, opt.max_step, t_end - t});
        const bool final_step = h >= t_end - t;
        if (h <= std::abs(t) * 1e-15 || h < std::numeric_limits<double>::min()) {
            throw IntegrationError("integrate: step size underflow", t, h);
        }
        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f(t + h, y_new);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double tol = opt.atol + opt.rtol * std::max(y.norm(), y_new.norm());
        const double ratio = err.norm() / tol;
        if (!std::isfinite(ratio)) throw IntegrationError("integrate: non-finite state", t, h);

        if (ratio <= 1.0) {
            const double t_new = final_step ? t_end : t + h;
            if (next < times.size() && times[next] <= t_new) {
                const State<N> r2 = y_new - y;
                const State<N> r3 = h * k1 - r2;
                const State<N> r4 = r2 - h * k7 - r3;
                const State<N> r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next < times.size() && times[next] <= t_new) {
                    const double th = (times[next] - t) / h;
                    const double th1 = 1.0 - th;
                    out.push_back(y + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5))));
                    ++next;
                }
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            ++local.accepted;
            const double fac = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            ++local.rejected;
            h *= std::max(0.2, 0.9 * std::pow(ratio, -0.2));
        }
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace ramanforge::ode
