#include "arpsim/special_functions.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace arpsim::special {

namespace {

constexpr double kSeriesLimit = 12.0;

double bessel_series(int m, double x) {
  // sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > half) break;
  }
  return sum;
}

// Hankel expansion; only used for x > kSeriesLimit and order 0 or 1.
double bessel_hankel(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;  // asymptotic series started diverging
    last = std::abs(term);
    // k odd feeds Q, k even feeds P, with alternating signs within each
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_large(int m, double x) {
  if (m < x) {
    double jm1 = bessel_hankel(0, x);
    if (m == 0) return jm1;
    double j = bessel_hankel(1, x);
    for (int n = 1; n < m; ++n) {
      const double next = (2.0 * n / x) * j - jm1;
      jm1 = j;
      j = next;
    }
    return j;
  }
  // Miller backward recurrence, normalized with 1 = J0 + 2 sum J_2k.
  int start = 2 * ((m + static_cast<int>(x) + 40) / 2);
  double jp1 = 0.0;
  double j = 1e-300;
  double norm = 0.0;
  double result = 0.0;
  for (int n = start; n > 0; --n) {
    const double jm1 = (2.0 * n / x) * j - jp1;
    jp1 = j;
    j = jm1;
    if (n - 1 == m) result = j;
    if ((n - 1) % 2 == 0) norm += (n - 1 == 0) ? j : 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
  }
  return result / norm;
}

}  // namespace

double bessel_j(int order, double x) {
  double sign = 1.0;
  int m = order;
  if (m < 0) {
    m = -m;
    if (m % 2 != 0) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (m % 2 != 0) sign = -sign;
  }
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  const double value = x <= kSeriesLimit ? bessel_series(m, x) : bessel_large(m, x);
  return sign * value;
}

double bessel_j_zero(int order, int k) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero: k must be >= 1");
  const int m = std::abs(order);
  // McMahon's estimate, then bracket the sign change and refine.
  const double beta = (k + 0.5 * m - 0.25) * std::numbers::pi;
  const double mu = 4.0 * m * m;
  double x = beta - (mu - 1.0) / (8.0 * beta);
  double step = 0.25;
  double lo = std::max(1e-6, x - step);
  double hi = x + step;
  while (std::signbit(bessel_j(m, lo)) == std::signbit(bessel_j(m, hi))) {
    step *= 1.5;
    lo = std::max(1e-6, x - step);
    hi = x + step;
  }
  // J_m' = (J_{m-1} - J_{m+1}) / 2, Newton safeguarded by the bracket
  for (int it = 0; it < 100; ++it) {
    const double f = bessel_j(m, x);
    if (f == 0.0) return x;
    const double df = 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
    if (std::signbit(f) == std::signbit(bessel_j(m, lo))) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * std::abs(x)) return next;
    x = next;
  }
  return x;
}

std::complex<double> log_gamma(std::complex<double> z) {
  using C = std::complex<double>;
  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // log Gamma(z) = log(pi) - log sin(pi z) - log Gamma(1 - z)
    return C(std::log(std::numbers::pi), 0.0) - std::log(std::sin(std::numbers::pi * z)) -
           log_gamma(1.0 - z);
  }
  const C zm1 = z - 1.0;
  C series(kLanczos[0], 0.0);
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (zm1 + static_cast<double>(i));
  const C t = zm1 + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

double arg_gamma_one_minus_i(double kappa) { return log_gamma({1.0, -kappa}).imag(); }

}  // namespace arpsim::special
