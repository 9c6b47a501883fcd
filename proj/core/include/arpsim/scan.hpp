#pragma once

// Phase-averaged transfer efficiency and 1-D / 2-D parameter scans.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arpsim/dynamics.hpp"
#include "arpsim/multijump.hpp"
#include "arpsim/types.hpp"

namespace arpsim {

enum class Engine { full_simulation, multijump };

const char* to_string(Engine e);
/// Accepts "full", "full_simulation", "multijump".
Engine parse_engine(const std::string& s);

enum class ScanParameter { noise_frequency, noise_amplitude, sweep_rate };

const char* to_string(ScanParameter p);
ScanParameter parse_scan_parameter(const std::string& s);

/// Uniform phase grid phi_k = 2 pi k / n_phases, k = 0 .. n_phases - 1.
struct PhaseAverageSpec {
  int n_phases = 16;

  double phase(int k) const { return kTwoPi * k / n_phases; }
  void validate() const;
};

/// Everything an efficiency evaluation needs besides the point coordinates.
struct EngineSettings {
  Engine engine = Engine::full_simulation;
  IntegratorSettings integrator{};
  MultiJumpOptions multijump{};
};

/// Efficiency at the single phase stored in `noise`.
double engine_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const EngineSettings& engine);

/// Thrown when an engine fails at one phase sample; carries that phase.
class PhaseEvaluationError : public std::runtime_error {
 public:
  PhaseEvaluationError(double phase, const std::string& what) : std::runtime_error(what), phase_(phase) {}
  double phase() const { return phase_; }

 private:
  double phase_;
};

/// Mean over the phase grid, accumulated in ascending k. The phase in `noise` is ignored.
double phase_averaged_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const PhaseAverageSpec& phases,
                                 const EngineSettings& engine);

struct ScanAxis {
  ScanParameter parameter = ScanParameter::noise_frequency;
  double start = 0.0;
  double stop = 1.0;
  /// >= 2 with start < stop, or 1 for a degenerate single point at `start`.
  int n_points = 2;

  std::vector<double> coordinates() const;
  void validate() const;
};

struct ScanSpec {
  ScanAxis axis1;
  std::optional<ScanAxis> axis2;
  SweepConfig sweep;
  NoiseConfig noise;
  PhaseAverageSpec phases;
  EngineSettings engine;

  void validate() const;
};

struct EfficiencyGrid {
  std::vector<double> axis1;
  std::vector<double> axis2;  // empty for 1-D scans
  /// row-major, values[i * max(1, n2) + j]
  std::vector<double> values;
  ScanSpec spec;
  std::string version;

  std::size_t n1() const { return axis1.size(); }
  std::size_t n2() const { return axis2.empty() ? 1 : axis2.size(); }
  double at(std::size_t i, std::size_t j = 0) const { return values[i * n2() + j]; }
  /// Row (fixed axis1 index) of a 2-D grid, or the whole 1-D grid for i = 0 when 1-D.
  std::vector<double> row(std::size_t i) const;
  /// Column (fixed axis2 index).
  std::vector<double> column(std::size_t j) const;
};

/// Raised when a grid point fails; the message carries the point coordinates.
class ScanError : public std::runtime_error {
 public:
  ScanError(double c1, std::optional<double> c2, const std::string& what)
      : std::runtime_error(what), c1_(c1), c2_(c2) {}
  double axis1_value() const { return c1_; }
  std::optional<double> axis2_value() const { return c2_; }

 private:
  double c1_;
  std::optional<double> c2_;
};

struct ScanOptions {
  unsigned workers = 0;  // 0 = machine parallelism
  /// Called after each finished (point, phase) task with (done, total). May be called concurrently.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Apply one coordinate to the sweep/noise pair.
void apply_parameter(ScanParameter p, double value, SweepConfig& sweep, NoiseConfig& noise);

/// Grid of phase-averaged efficiencies. Bit-identical for any worker count:
/// every (point, phase) task writes its own slot and means are summed in ascending phase order.
EfficiencyGrid run_scan(const ScanSpec& spec, const ScanOptions& options = {});

/// Evaluate a list of independent (sweep, noise) points with phase averaging, in parallel.
std::vector<double> evaluate_points(const std::vector<std::pair<SweepConfig, NoiseConfig>>& points,
                                    const PhaseAverageSpec& phases, const EngineSettings& engine,
                                    const ScanOptions& options = {});

void write_grid_csv(std::ostream& os, const EfficiencyGrid& grid);
/// Structured (JSON) echo of the full spec plus the artifact version.
std::string grid_metadata_json(const EfficiencyGrid& grid);

class NoSpacingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeakSpacing {
  std::vector<std::size_t> peak_indices;
  std::vector<double> peak_positions;
  std::vector<double> spacings;
  double mean_spacing = 0.0;
};

/// Local maxima (strictly above both neighbours, optionally after a 3-point
/// moving average) and the spacings between adjacent ones.
/// Throws NoSpacingError when fewer than two peaks exist.
PeakSpacing peak_spacing(std::span<const double> coordinates, std::span<const double> values, bool smooth = false);

}  // namespace arpsim
