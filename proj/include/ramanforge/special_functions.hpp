#pragma once

#include <complex>
#include <utility>

namespace ramanforge::special {

inline constexpr int kMaxBesselOrder = 200;
inline constexpr double kMaxBesselArgument = 50.0;

// Bessel function of the first kind J_n(x), integer order.
// Valid for |n| <= 200, |x| <= 50; absolute error below 1e-12 on that window.
// Small arguments use the power series; otherwise Miller's downward recurrence
// normalized with J_0 + 2 sum_k J_2k = 1. Throws DomainError outside the window.
double bessel_j(int order, double x);

// Truncation |n| <= ceil(|arg|) + 30 used for the infinite Bessel sums.
int default_truncation(double argument);

struct IdentityResidual {
    std::complex<double> lhs;
    std::complex<double> rhs;
    double abs_error = 0.0;  // |lhs - rhs|
    int truncation_order = 0;
};

IdentityResidual make_residual(std::complex<double> lhs, std::complex<double> rhs, int trunc);

// sum_{|n|<=trunc} J_n(beta) J_{n+k}(beta) against 1 (k = 0) or 0.
// beta in [0, 2pi]; trunc >= ceil(beta) + 20.
IdentityResidual identity_pure_pm(double beta, int k, int trunc);

// J_k(2 z sin phi) against (-i)^k e^{i k phi} sum_n J_n(z) J_{n+k}(z) e^{2 i n phi}.
// z in [0, 6]; trunc >= ceil(z) + 30.
IdentityResidual identity_quadratic(double z, double phi, int k, int trunc);

// Even-sideband identities:
//   first:  sum_{n even} J_n(beta)^2            = (1 + J_0(2 beta)) / 2
//   second: sum_{n even} J_n(beta) J_{n+2}(beta) = J_2(2 beta) / 2
std::pair<IdentityResidual, IdentityResidual> identity_even_sidebands(double beta, int trunc);

}  // namespace ramanforge::special
