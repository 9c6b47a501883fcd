#pragma once

// Closed-form results: Landau-Zener probabilities, the worst-case transfer bound
// under weak sinusoidal noise, and the sufficient amplitude/frequency slope.

namespace arpsim {

/// Acceptance threshold x in (0, 1); an efficiency is acceptable when P_e > x * P_LZ.
class ThresholdSpec {
 public:
  explicit ThresholdSpec(double x);
  double value() const { return x_; }

 private:
  double x_;
};

/// Diabatic (lost) fraction exp(-pi Omega0^2 / (2 omega_dot)).
double lz_lost(double rabi_frequency, double sweep_rate);

/// Ideal transfer 1 - lz_lost.
double lz_transfer(double rabi_frequency, double sweep_rate);

/// Worst-case transfer bound keeping the -1, 0, +1 noise resonances:
///   P_LZ * (1 - 2 exp(-pi Omega0^2 delta^2 / (8 omega_dot omega^2)))^2.
/// The Omega0^2 in the exponent makes it dimensionless; it is 1 in natural units.
double p_min_unclamped(double rabi_frequency, double sweep_rate, double noise_amplitude,
                       double noise_frequency);

/// p_min_unclamped on its monotone branch (exponent <= ln 2); 0 once the inner
/// factor has passed through zero, where the bound carries no information.
double p_min(double rabi_frequency, double sweep_rate, double noise_amplitude, double noise_frequency);

enum class SlopeVariant {
  /// sqrt(-8/pi ln((sqrt(x)+1)/2)) sqrt(omega_dot/Omega0^2): small-amplitude branch.
  printed,
  /// sqrt(-8/pi ln((1-sqrt(x))/2)) sqrt(omega_dot/Omega0^2): the large-exponent root.
  rederived,
};

const char* to_string(SlopeVariant v);

/// Largest delta_osc / omega_osc ratio for which p_min stays above x * P_LZ.
double s_sufficient(ThresholdSpec x, double sweep_rate, double rabi_frequency,
                    SlopeVariant variant = SlopeVariant::printed);

/// First positive zero of J_0 (~2.404825557695773).
double critical_ratio();

}  // namespace arpsim
