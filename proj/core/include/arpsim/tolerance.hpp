#pragma once

// Noise tolerance: the largest noise amplitude a sweep can tolerate at a given
// noise frequency while keeping P_e > x * P_LZ, and the slope of the linear
// lower boundary of that curve.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arpsim/analytic.hpp"
#include "arpsim/scan.hpp"

namespace arpsim {

enum class AmplitudeConvention {
  /// largest amplitude before the first unacceptable one on the upward scan
  first_failure,
  /// largest acceptable amplitude anywhere on the scan
  last_acceptable,
};

const char* to_string(AmplitudeConvention c);
AmplitudeConvention parse_amplitude_convention(const std::string& s);

struct ToleranceOptions {
  double threshold = 0.99;
  EngineSettings engine;
  PhaseAverageSpec phases;
  /// Absolute amplitude step; 0 means noise_frequency * amplitude_step_fraction.
  double amplitude_step = 0.0;
  double amplitude_step_fraction = 1.0 / 50.0;
  /// Scan ceiling is ceiling_factor * noise_frequency.
  double ceiling_factor = 5.0;
  AmplitudeConvention convention = AmplitudeConvention::first_failure;

  void validate() const;
};

struct AmplitudeSearch {
  double first_failure = 0.0;
  double last_acceptable = 0.0;
  /// no failure on [0, ceiling]
  bool hit_ceiling = false;
  /// zero amplitude already fails (finite-range losses exceed the threshold)
  bool zero_unacceptable = false;
  int evaluations = 0;

  double value(AmplitudeConvention c) const {
    return c == AmplitudeConvention::first_failure ? first_failure : last_acceptable;
  }
};

/// Upward scan of delta_osc in fixed steps. The last_acceptable value is only
/// complete when `full_scan` is set; otherwise the scan stops at the first failure.
AmplitudeSearch search_amplitude(double noise_frequency, const SweepConfig& sweep, const ToleranceOptions& options,
                                 bool full_scan);

/// search_amplitude(...).value(options.convention)
double max_acceptable_amplitude(double noise_frequency, const SweepConfig& sweep, const ToleranceOptions& options);

struct ToleranceCurve {
  std::vector<double> frequencies;
  std::vector<double> max_amplitudes;
  std::vector<bool> hit_ceiling;
  double threshold = 0.0;
  double sweep_rate = 0.0;
  Engine engine = Engine::full_simulation;
  AmplitudeConvention convention = AmplitudeConvention::first_failure;
};

class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One amplitude search per frequency, run concurrently; results placed by index.
ToleranceCurve tolerance_curve(std::span<const double> frequencies, const SweepConfig& sweep,
                               const ToleranceOptions& options, unsigned workers = 0);

/// min_i max_amplitudes[i] / frequencies[i]: the steepest line through the
/// origin lying on or below every point. Needs >= 5 points with positive frequencies.
double empirical_sufficient_slope(const ToleranceCurve& curve);

/// Default frequency grid: n points uniform over (0.2, 1.2 * max |Delta|], excluding 0.2.
std::vector<double> default_frequency_grid(const SweepConfig& sweep, int n = 200);

struct BoundarySlopeResult {
  std::vector<double> sweep_rates;
  std::vector<double> empirical_slopes;
  std::vector<double> analytic_slopes;            // printed variant
  std::vector<double> analytic_slopes_rederived;  // other root
  double threshold = 0.0;
};

BoundarySlopeResult boundary_slopes(std::span<const double> sweep_rates, std::span<const double> frequencies,
                                    const SweepConfig& sweep, const ToleranceOptions& options, unsigned workers = 0);

struct VariantVerdict {
  SlopeVariant best = SlopeVariant::printed;
  /// analytic slope <= empirical slope at every rate
  bool printed_sufficient = false;
  bool rederived_sufficient = false;
  /// mean |ln(analytic / empirical)|
  double printed_log_distance = 0.0;
  double rederived_log_distance = 0.0;
};

/// Picks the variant that stays below the empirical boundary at every rate; ties
/// and the all-violating case are broken by the smaller log distance.
VariantVerdict compare_slope_variants(const BoundarySlopeResult& result);

void write_curve_csv(std::ostream& os, const ToleranceCurve& curve);
void write_slopes_csv(std::ostream& os, const BoundarySlopeResult& result);

}  // namespace arpsim
