#include "arpsim/types.hpp"

#include <cmath>

namespace arpsim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void SweepConfig::validate() const {
  require(std::isfinite(rabi_frequency) && rabi_frequency > 0.0,
          "sweep: rabi_frequency must be finite and > 0");
  require(std::isfinite(sweep_rate) && sweep_rate > 0.0, "sweep: sweep_rate must be finite and > 0");
  require(std::isfinite(detuning_start) && std::isfinite(detuning_end),
          "sweep: detuning range must be finite");
  require(detuning_start < detuning_end, "sweep: detuning_start must be < detuning_end");
  const double t = duration();
  require(std::isfinite(t) && t > 0.0, "sweep: duration must be finite and positive");
}

double normalize_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

NoiseConfig NoiseConfig::normalized() const {
  NoiseConfig n = *this;
  n.phase = normalize_phase(phase);
  return n;
}

NoiseConfig NoiseConfig::with_phase(double phi) const {
  NoiseConfig n = *this;
  n.phase = normalize_phase(phi);
  return n;
}

NoiseConfig NoiseConfig::with_amplitude(double a) const {
  NoiseConfig n = *this;
  n.amplitude = a;
  return n;
}

NoiseConfig NoiseConfig::with_frequency(double f) const {
  NoiseConfig n = *this;
  n.frequency = f;
  return n;
}

void NoiseConfig::validate() const {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "noise: amplitude must be finite and >= 0");
  require(std::isfinite(frequency) && frequency >= 0.0, "noise: frequency must be finite and >= 0");
  require(std::isfinite(phase), "noise: phase must be finite");
}

double BlochVector::length() const { return std::sqrt(u * u + v * v + w * w); }

double detuning(double t, const SweepConfig& sweep, const NoiseConfig& noise) {
  return sweep.sweep_rate * t - noise.amplitude * std::cos(noise.frequency * t + noise.phase);
}

BlochVector bloch_from_state(const StateVector& s) {
  if (std::abs(s.norm_squared() - 1.0) > 1e-6) {
    throw ConfigError("bloch_from_state: state is not normalized");
  }
  const Complex coherence = s.ground * std::conj(s.excited);
  return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(s.excited) - std::norm(s.ground)};
}

}  // namespace arpsim
