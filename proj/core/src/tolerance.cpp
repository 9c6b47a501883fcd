#include "arpsim/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "arpsim/format.hpp"
#include "arpsim/parallel.hpp"

namespace arpsim {

const char* to_string(AmplitudeConvention c) {
  return c == AmplitudeConvention::first_failure ? "first_failure" : "last_acceptable";
}

AmplitudeConvention parse_amplitude_convention(const std::string& s) {
  if (s == "first_failure") return AmplitudeConvention::first_failure;
  if (s == "last_acceptable") return AmplitudeConvention::last_acceptable;
  throw ConfigError("unknown amplitude convention '" + s + "'");
}

void ToleranceOptions::validate() const {
  ThresholdSpec{threshold};
  if (!(amplitude_step >= 0.0)) throw ConfigError("tolerance: amplitude_step must be >= 0");
  if (amplitude_step == 0.0 && !(amplitude_step_fraction > 0.0)) {
    throw ConfigError("tolerance: amplitude_step_fraction must be > 0");
  }
  if (!(ceiling_factor > 0.0)) throw ConfigError("tolerance: ceiling_factor must be > 0");
  phases.validate();
  engine.integrator.validate();
}

AmplitudeSearch search_amplitude(double noise_frequency, const SweepConfig& sweep, const ToleranceOptions& options,
                                 bool full_scan) {
  if (!(noise_frequency > 0.0)) throw ConfigError("tolerance: noise frequency must be > 0");
  sweep.validate();
  options.validate();
  const double step = options.amplitude_step > 0.0 ? options.amplitude_step
                                                   : noise_frequency * options.amplitude_step_fraction;
  const double ceiling = options.ceiling_factor * noise_frequency;
  const auto n_steps = static_cast<int>(std::floor(ceiling / step + 1e-9));
  const double target = options.threshold * lz_transfer(sweep.rabi_frequency, sweep.sweep_rate);

  AmplitudeSearch out;
  bool failed = false;
  bool any_acceptable = false;
  for (int k = 0; k <= n_steps; ++k) {
    const double amplitude = k * step;
    const NoiseConfig noise{amplitude, noise_frequency, 0.0};
    const double pe = phase_averaged_efficiency(sweep, noise, options.phases, options.engine);
    ++out.evaluations;
    const bool ok = pe > target;
    if (ok) {
      out.last_acceptable = amplitude;
      any_acceptable = true;
      if (!failed) out.first_failure = amplitude;
    } else {
      if (k == 0) out.zero_unacceptable = true;
      if (!failed && !full_scan) return out;
      failed = true;
    }
  }
  out.hit_ceiling = !failed;
  if (!any_acceptable) out.last_acceptable = 0.0;
  return out;
}

double max_acceptable_amplitude(double noise_frequency, const SweepConfig& sweep, const ToleranceOptions& options) {
  const bool full = options.convention == AmplitudeConvention::last_acceptable;
  return search_amplitude(noise_frequency, sweep, options, full).value(options.convention);
}

ToleranceCurve tolerance_curve(std::span<const double> frequencies, const SweepConfig& sweep,
                               const ToleranceOptions& options, unsigned workers) {
  options.validate();
  sweep.validate();
  ToleranceCurve curve;
  curve.frequencies.assign(frequencies.begin(), frequencies.end());
  curve.max_amplitudes.assign(frequencies.size(), 0.0);
  std::vector<char> ceiling(frequencies.size(), 0);
  curve.threshold = options.threshold;
  curve.sweep_rate = sweep.sweep_rate;
  curve.engine = options.engine.engine;
  curve.convention = options.convention;
  const bool full = options.convention == AmplitudeConvention::last_acceptable;
  parallel_for(frequencies.size(), workers, [&](std::size_t i) {
    try {
      const AmplitudeSearch s = search_amplitude(frequencies[i], sweep, options, full);
      curve.max_amplitudes[i] = s.value(options.convention);
      ceiling[i] = s.hit_ceiling ? 1 : 0;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ToleranceError("tolerance point omega_osc=" + format_double(frequencies[i]) +
                           ", sweep_rate=" + format_double(sweep.sweep_rate) + " failed: " + e.what());
    }
  });
  curve.hit_ceiling.assign(ceiling.begin(), ceiling.end());
  return curve;
}

double empirical_sufficient_slope(const ToleranceCurve& curve) {
  if (curve.frequencies.size() != curve.max_amplitudes.size()) {
    throw ToleranceError("empirical_sufficient_slope: array length mismatch");
  }
  if (curve.frequencies.size() < 5) throw ToleranceError("empirical_sufficient_slope: need at least 5 points");
  double slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.frequencies.size(); ++i) {
    if (!(curve.frequencies[i] > 0.0)) throw ToleranceError("empirical_sufficient_slope: frequencies must be > 0");
    slope = std::min(slope, curve.max_amplitudes[i] / curve.frequencies[i]);
  }
  return slope;
}

std::vector<double> default_frequency_grid(const SweepConfig& sweep, int n) {
  if (n < 1) throw ConfigError("frequency grid needs at least one point");
  const double lo = 0.2;
  const double hi = 1.2 * std::max(std::abs(sweep.detuning_start), std::abs(sweep.detuning_end));
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f[i] = lo + (hi - lo) * (i + 1) / n;
  return f;
}

BoundarySlopeResult boundary_slopes(std::span<const double> sweep_rates, std::span<const double> frequencies,
                                    const SweepConfig& sweep, const ToleranceOptions& options, unsigned workers) {
  BoundarySlopeResult r;
  r.threshold = options.threshold;
  const ThresholdSpec x(options.threshold);
  for (double rate : sweep_rates) {
    SweepConfig s = sweep;
    s.sweep_rate = rate;
    const ToleranceCurve curve = tolerance_curve(frequencies, s, options, workers);
    r.sweep_rates.push_back(rate);
    r.empirical_slopes.push_back(empirical_sufficient_slope(curve));
    r.analytic_slopes.push_back(s_sufficient(x, rate, s.rabi_frequency, SlopeVariant::printed));
    r.analytic_slopes_rederived.push_back(s_sufficient(x, rate, s.rabi_frequency, SlopeVariant::rederived));
  }
  return r;
}

VariantVerdict compare_slope_variants(const BoundarySlopeResult& r) {
  VariantVerdict v;
  v.printed_sufficient = true;
  v.rederived_sufficient = true;
  const std::size_t n = r.sweep_rates.size();
  if (n == 0) throw ToleranceError("compare_slope_variants: empty result");
  for (std::size_t i = 0; i < n; ++i) {
    const double emp = r.empirical_slopes[i];
    v.printed_sufficient = v.printed_sufficient && r.analytic_slopes[i] <= emp;
    v.rederived_sufficient = v.rederived_sufficient && r.analytic_slopes_rederived[i] <= emp;
    // a zero empirical slope is infinitely far from either variant
    const double safe = std::max(emp, 1e-300);
    v.printed_log_distance += std::abs(std::log(r.analytic_slopes[i] / safe)) / n;
    v.rederived_log_distance += std::abs(std::log(r.analytic_slopes_rederived[i] / safe)) / n;
  }
  if (v.printed_sufficient != v.rederived_sufficient) {
    v.best = v.printed_sufficient ? SlopeVariant::printed : SlopeVariant::rederived;
  } else {
    v.best = v.printed_log_distance <= v.rederived_log_distance ? SlopeVariant::printed : SlopeVariant::rederived;
  }
  return v;
}

void write_curve_csv(std::ostream& os, const ToleranceCurve& curve) {
  os << "frequency,max_amplitude,hit_ceiling\n";
  for (std::size_t i = 0; i < curve.frequencies.size(); ++i) {
    os << format_double(curve.frequencies[i]) << ',' << format_double(curve.max_amplitudes[i]) << ','
       << (curve.hit_ceiling.empty() ? 0 : static_cast<int>(curve.hit_ceiling[i])) << '\n';
  }
}

void write_slopes_csv(std::ostream& os, const BoundarySlopeResult& r) {
  os << "sweep_rate,empirical_slope,analytic_slope_printed,analytic_slope_rederived\n";
  for (std::size_t i = 0; i < r.sweep_rates.size(); ++i) {
    os << format_double(r.sweep_rates[i]) << ',' << format_double(r.empirical_slopes[i]) << ','
       << format_double(r.analytic_slopes[i]) << ',' << format_double(r.analytic_slopes_rederived[i]) << '\n';
  }
}

}  // namespace arpsim
