#include "arpsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arpsim/special_functions.hpp"
#include "arpsim/types.hpp"

namespace arpsim {

namespace {

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(what) + " must be finite and > 0");
}

double noise_exponent(double rabi, double rate, double amplitude, double frequency) {
  require_positive(rabi, "rabi_frequency");
  require_positive(rate, "sweep_rate");
  require_positive(frequency, "noise frequency");
  if (!(amplitude >= 0.0)) throw ConfigError("noise amplitude must be >= 0");
  const double ratio = amplitude / frequency;
  return kPi * rabi * rabi * ratio * ratio / (8.0 * rate);
}

}  // namespace

ThresholdSpec::ThresholdSpec(double x) : x_(x) {
  if (!(x > 0.0 && x < 1.0)) throw ConfigError("threshold x must lie in (0, 1)");
}

double lz_lost(double rabi_frequency, double sweep_rate) {
  require_positive(rabi_frequency, "rabi_frequency");
  require_positive(sweep_rate, "sweep_rate");
  return std::exp(-kPi * rabi_frequency * rabi_frequency / (2.0 * sweep_rate));
}

double lz_transfer(double rabi_frequency, double sweep_rate) {
  // -expm1 keeps precision when the loss is close to 1
  require_positive(rabi_frequency, "rabi_frequency");
  require_positive(sweep_rate, "sweep_rate");
  return -std::expm1(-kPi * rabi_frequency * rabi_frequency / (2.0 * sweep_rate));
}

double p_min_unclamped(double rabi_frequency, double sweep_rate, double noise_amplitude,
                       double noise_frequency) {
  const double a = noise_exponent(rabi_frequency, sweep_rate, noise_amplitude, noise_frequency);
  const double inner = 1.0 - 2.0 * std::exp(-a);
  return lz_transfer(rabi_frequency, sweep_rate) * inner * inner;
}

double p_min(double rabi_frequency, double sweep_rate, double noise_amplitude, double noise_frequency) {
  const double a = noise_exponent(rabi_frequency, sweep_rate, noise_amplitude, noise_frequency);
  if (a > std::numbers::ln2) return 0.0;
  return std::max(0.0, p_min_unclamped(rabi_frequency, sweep_rate, noise_amplitude, noise_frequency));
}

const char* to_string(SlopeVariant v) {
  switch (v) {
    case SlopeVariant::printed: return "printed";
    case SlopeVariant::rederived: return "rederived";
  }
  return "unknown";
}

double s_sufficient(ThresholdSpec x, double sweep_rate, double rabi_frequency, SlopeVariant variant) {
  require_positive(rabi_frequency, "rabi_frequency");
  require_positive(sweep_rate, "sweep_rate");
  const double root = std::sqrt(x.value());
  const double arg = variant == SlopeVariant::printed ? 0.5 * (root + 1.0) : 0.5 * (1.0 - root);
  return std::sqrt(-8.0 / kPi * std::log(arg)) * std::sqrt(sweep_rate / (rabi_frequency * rabi_frequency));
}

double critical_ratio() {
  static const double zero = special::bessel_j_zero(0, 1);
  return zero;
}

}  // namespace arpsim
