#pragma once

// Test-only reference propagator: classical RK4 on the bare amplitudes with a
// small fixed step. Shares no code with the library integrators.

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

struct Result {
  std::complex<double> ground;
  std::complex<double> excited;
};

/// i d/dt (g, e) = [[0, rabi/2], [rabi/2, -Delta(t)]] (g, e),
/// Delta(t) = rate t - amp cos(freq t + phase), from t0 to t1.
inline Result propagate(double rabi, double rate, double amp, double freq, double phase, double t0, double t1,
                        double h) {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  auto rhs = [&](double t, C g, C e) {
    const double delta = rate * t - amp * std::cos(freq * t + phase);
    return std::array<C, 2>{-i * (0.5 * rabi) * e, -i * ((0.5 * rabi) * g - delta * e)};
  };
  const long n = static_cast<long>(std::ceil((t1 - t0) / h));
  const double dt = (t1 - t0) / static_cast<double>(n);
  C g{1.0, 0.0}, e{0.0, 0.0};
  for (long k = 0; k < n; ++k) {
    const double t = t0 + k * dt;
    const auto k1 = rhs(t, g, e);
    const auto k2 = rhs(t + dt / 2, g + dt / 2 * k1[0], e + dt / 2 * k1[1]);
    const auto k3 = rhs(t + dt / 2, g + dt / 2 * k2[0], e + dt / 2 * k2[1]);
    const auto k4 = rhs(t + dt, g + dt * k3[0], e + dt * k3[1]);
    g += dt / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    e += dt / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  return {g, e};
}

}  // namespace oracle
