#include "ramanforge/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ramanforge/errors.hpp"

namespace ramanforge::special {

namespace {

constexpr double kSeriesCutoff = 2.0;
constexpr double kRescale = 1e250;
constexpr double kRescaleInv = 1e-250;

double odd_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// J_n(x), n >= 0, 0 < x <= kSeriesCutoff.
double series(int n, double x) {
    const double half = 0.5 * x;
    double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
    if (term == 0.0) return 0.0;
    const double q = -half * half;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// J_n(x), n >= 0, x > 0, by downward recurrence from an even start order.
double miller(int n, double x) {
    const int base = std::max(n, static_cast<int>(std::ceil(x)));
    const int start = 2 * ((base + static_cast<int>(std::sqrt(160.0 * base)) + 20) / 2);
    const double two_over_x = 2.0 / x;

    double above = 0.0;   // j_{k+1}
    double current = 1.0; // j_k, k = start
    double norm = 0.0;    // j_0 + 2 sum_{k even >= 2} j_k
    double result = 0.0;
    for (int k = start; k > 0; --k) {
        const double below = k * two_over_x * current - above;  // j_{k-1}
        above = current;
        current = below;
        if (std::abs(current) > kRescale) {
            current *= kRescaleInv;
            above *= kRescaleInv;
            norm *= kRescaleInv;
            result *= kRescaleInv;
        }
        const int idx = k - 1;
        if (idx == n) result = current;
        if (idx > 0 && idx % 2 == 0) norm += 2.0 * current;
    }
    norm += current;  // j_0
    return result / norm;
}

void require_trunc(int trunc, int minimum, const char* op) {
    if (trunc < minimum) {
        throw TruncationError(std::string(op) + ": truncation order " + std::to_string(trunc) +
                              " below required minimum " + std::to_string(minimum));
    }
}

}  // namespace

double bessel_j(int order, double x) {
    if (std::abs(order) > kMaxBesselOrder || !(std::abs(x) <= kMaxBesselArgument)) {
        throw DomainError("bessel_j: order " + std::to_string(order) + " / argument " +
                          std::to_string(x) + " outside |n| <= 200, |x| <= 50");
    }
    double sign = 1.0;
    int n = order;
    if (n < 0) {
        n = -n;
        sign *= odd_sign(n);
    }
    if (x < 0.0) {
        x = -x;
        sign *= odd_sign(n);
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    const double value = (x <= kSeriesCutoff) ? series(n, x) : miller(n, x);
    return sign * value;
}

int default_truncation(double argument) {
    return static_cast<int>(std::ceil(std::abs(argument))) + 30;
}

IdentityResidual make_residual(std::complex<double> lhs, std::complex<double> rhs, int trunc) {
    return {lhs, rhs, std::abs(lhs - rhs), trunc};
}

IdentityResidual identity_pure_pm(double beta, int k, int trunc) {
    if (!(beta >= 0.0 && beta <= 2.0 * std::numbers::pi)) {
        throw DomainError("identity_pure_pm: beta outside [0, 2pi]");
    }
    require_trunc(trunc, static_cast<int>(std::ceil(beta)) + 20, "identity_pure_pm");
    double lhs = 0.0;
    for (int n = -trunc; n <= trunc; ++n) lhs += bessel_j(n, beta) * bessel_j(n + k, beta);
    return make_residual(lhs, k == 0 ? 1.0 : 0.0, trunc);
}

IdentityResidual identity_quadratic(double z, double phi, int k, int trunc) {
    if (!(z >= 0.0 && z <= 6.0)) throw DomainError("identity_quadratic: z outside [0, 6]");
    require_trunc(trunc, static_cast<int>(std::ceil(z)) + 30, "identity_quadratic");
    const std::complex<double> lhs = bessel_j(k, 2.0 * z * std::sin(phi));
    std::complex<double> sum = 0.0;
    for (int n = -trunc; n <= trunc; ++n) {
        sum += bessel_j(n, z) * bessel_j(n + k, z) * std::polar(1.0, 2.0 * n * phi);
    }
    // (-i)^k e^{i k phi} = e^{i k (phi - pi/2)}
    const std::complex<double> prefactor = std::polar(1.0, k * (phi - 0.5 * std::numbers::pi));
    return make_residual(lhs, prefactor * sum, trunc);
}

std::pair<IdentityResidual, IdentityResidual> identity_even_sidebands(double beta, int trunc) {
    if (!(beta >= 0.0 && beta <= 2.0 * std::numbers::pi)) {
        throw DomainError("identity_even_sidebands: beta outside [0, 2pi]");
    }
    require_trunc(trunc, static_cast<int>(std::ceil(beta)) + 20, "identity_even_sidebands");
    double power = 0.0;
    double pairs = 0.0;
    const int start = -(trunc - (trunc % 2));  // largest even magnitude <= trunc
    for (int n = start; n <= trunc; n += 2) {
        const double jn = bessel_j(n, beta);
        power += jn * jn;
        pairs += jn * bessel_j(n + 2, beta);
    }
    return {make_residual(power, 0.5 * (1.0 + bessel_j(0, 2.0 * beta)), trunc),
            make_residual(pairs, 0.5 * bessel_j(2, 2.0 * beta), trunc)};
}

}  // namespace ramanforge::special
