#pragma once

#include <complex>

namespace arpsim::special {

/// Bessel function of the first kind J_m(x) for integer order.
/// Ascending series for |x| <= 12, Hankel asymptotics plus recurrence beyond.
double bessel_j(int order, double x);

/// k-th positive zero (k >= 1) of J_m, refined by Newton iteration on bessel_j.
double bessel_j_zero(int order, int k);

/// Principal-branch-continuous log Gamma for Re z >= 0.5 (Lanczos, g = 7),
/// reflection formula otherwise.
std::complex<double> log_gamma(std::complex<double> z);

/// Continuous arg Gamma(1 - i kappa), i.e. Im log_gamma(1 - i kappa).
double arg_gamma_one_minus_i(double kappa);

}  // namespace arpsim::special
