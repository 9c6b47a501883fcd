#pragma once

// Domain types for a two-level system driven by a linearly chirped field whose
// level splitting carries a single sinusoidal perturbation.
//
// Units: hbar = 1 and the bare Rabi frequency sets the scale. Frequencies are in
// units of the Rabi frequency, times in its inverse, sweep rates in its square.

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arpsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

/// Thrown when a configuration violates a type invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Noiseless sweep definition. Time zero is the instant the unperturbed chirp
/// crosses resonance, so the sweep runs over [detuning_start, detuning_end] / sweep_rate.
struct SweepConfig {
  double rabi_frequency = 1.0;
  double sweep_rate = 0.2;
  double detuning_start = -10.0;
  double detuning_end = 10.0;

  double start_time() const { return detuning_start / sweep_rate; }
  double end_time() const { return detuning_end / sweep_rate; }
  double duration() const { return (detuning_end - detuning_start) / sweep_rate; }

  void validate() const;
};

/// delta(t) = amplitude * cos(frequency * t + phase)
struct NoiseConfig {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;

  /// Copy with the phase wrapped into [0, 2pi).
  NoiseConfig normalized() const;
  NoiseConfig with_phase(double phi) const;
  NoiseConfig with_amplitude(double a) const;
  NoiseConfig with_frequency(double f) const;

  void validate() const;
};

/// Wraps an angle into [0, 2pi).
double normalize_phase(double phi);

struct StateVector {
  Complex ground{1.0, 0.0};
  Complex excited{0.0, 0.0};

  double norm_squared() const { return std::norm(ground) + std::norm(excited); }
  double excited_population() const { return std::norm(excited); }
};

struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = -1.0;

  double length() const;
};

/// Instantaneous detuning omega_dot * t - delta_osc * cos(omega_osc * t + phi).
double detuning(double t, const SweepConfig& sweep, const NoiseConfig& noise);

/// u = 2 Re(c_g conj(c_e)), v = 2 Im(c_g conj(c_e)), w = |c_e|^2 - |c_g|^2.
/// Throws ConfigError if the state norm differs from 1 by more than 1e-6.
BlochVector bloch_from_state(const StateVector& s);

}  // namespace arpsim
