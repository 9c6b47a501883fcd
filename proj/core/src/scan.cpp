#include "arpsim/scan.hpp"

#include <atomic>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "arpsim/format.hpp"
#include "arpsim/parallel.hpp"
#include "arpsim/version.hpp"

namespace arpsim {

const char* to_string(Engine e) { return e == Engine::full_simulation ? "full_simulation" : "multijump"; }

Engine parse_engine(const std::string& s) {
  if (s == "full" || s == "full_simulation") return Engine::full_simulation;
  if (s == "multijump") return Engine::multijump;
  throw ConfigError("unknown engine '" + s + "' (expected full or multijump)");
}

const char* to_string(ScanParameter p) {
  switch (p) {
    case ScanParameter::noise_frequency: return "noise_frequency";
    case ScanParameter::noise_amplitude: return "noise_amplitude";
    case ScanParameter::sweep_rate: return "sweep_rate";
  }
  return "unknown";
}

ScanParameter parse_scan_parameter(const std::string& s) {
  if (s == "noise_frequency" || s == "omega_osc") return ScanParameter::noise_frequency;
  if (s == "noise_amplitude" || s == "delta_osc") return ScanParameter::noise_amplitude;
  if (s == "sweep_rate" || s == "omega_dot") return ScanParameter::sweep_rate;
  throw ConfigError("unknown scan parameter '" + s + "'");
}

void PhaseAverageSpec::validate() const {
  if (n_phases < 1) throw ConfigError("phases: n_phases must be >= 1");
}

double engine_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const EngineSettings& engine) {
  if (engine.engine == Engine::multijump) return multijump_efficiency(sweep, noise, engine.multijump);
  return propagate(sweep, noise, engine.integrator).final_excited_pop;
}

namespace {

double evaluate_phase(const SweepConfig& sweep, const NoiseConfig& noise, const PhaseAverageSpec& phases, int k,
                      const EngineSettings& engine) {
  const double phi = phases.phase(k);
  try {
    return engine_efficiency(sweep, noise.with_phase(phi), engine);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw PhaseEvaluationError(phi, std::string(e.what()) + " (phase=" + format_double(phi) + ")");
  }
}

double ordered_mean(const double* samples, int n) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += samples[k];
  return sum / n;
}

}  // namespace

double phase_averaged_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const PhaseAverageSpec& phases,
                                 const EngineSettings& engine) {
  phases.validate();
  std::vector<double> samples(static_cast<std::size_t>(phases.n_phases));
  for (int k = 0; k < phases.n_phases; ++k) samples[k] = evaluate_phase(sweep, noise, phases, k, engine);
  return ordered_mean(samples.data(), phases.n_phases);
}

std::vector<double> ScanAxis::coordinates() const {
  if (n_points == 1) return {start};
  std::vector<double> c(static_cast<std::size_t>(n_points));
  const double step = (stop - start) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) c[i] = start + i * step;
  c.back() = stop;
  return c;
}

void ScanAxis::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("scan axis: bounds must be finite");
  if (n_points == 1) return;
  if (n_points < 2) throw ConfigError("scan axis: n_points must be >= 1");
  if (!(start < stop)) throw ConfigError("scan axis: start must be < stop");
}

void ScanSpec::validate() const {
  axis1.validate();
  if (axis2) {
    axis2->validate();
    if (axis2->parameter == axis1.parameter) throw ConfigError("scan: axis names must be distinct");
  }
  sweep.validate();
  noise.validate();
  phases.validate();
  engine.integrator.validate();
}

void apply_parameter(ScanParameter p, double value, SweepConfig& sweep, NoiseConfig& noise) {
  switch (p) {
    case ScanParameter::noise_frequency: noise.frequency = value; break;
    case ScanParameter::noise_amplitude: noise.amplitude = value; break;
    case ScanParameter::sweep_rate: sweep.sweep_rate = value; break;
  }
}

std::vector<double> EfficiencyGrid::row(std::size_t i) const {
  return {values.begin() + static_cast<std::ptrdiff_t>(i * n2()),
          values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n2())};
}

std::vector<double> EfficiencyGrid::column(std::size_t j) const {
  std::vector<double> c(n1());
  for (std::size_t i = 0; i < n1(); ++i) c[i] = at(i, j);
  return c;
}

std::vector<double> evaluate_points(const std::vector<std::pair<SweepConfig, NoiseConfig>>& points,
                                    const PhaseAverageSpec& phases, const EngineSettings& engine,
                                    const ScanOptions& options) {
  phases.validate();
  const auto np = static_cast<std::size_t>(phases.n_phases);
  const std::size_t total = points.size() * np;
  std::vector<double> samples(total);
  std::atomic<std::size_t> done{0};
  parallel_for(total, options.workers, [&](std::size_t task) {
    const std::size_t p = task / np;
    const int k = static_cast<int>(task % np);
    samples[task] = evaluate_phase(points[p].first, points[p].second, phases, k, engine);
    if (options.progress) options.progress(done.fetch_add(1) + 1, total);
  });
  std::vector<double> means(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) means[p] = ordered_mean(samples.data() + p * np, phases.n_phases);
  return means;
}

EfficiencyGrid run_scan(const ScanSpec& spec, const ScanOptions& options) {
  spec.validate();
  EfficiencyGrid grid;
  grid.spec = spec;
  grid.version = kVersion;
  grid.axis1 = spec.axis1.coordinates();
  if (spec.axis2) grid.axis2 = spec.axis2->coordinates();
  const std::size_t n2 = grid.n2();

  std::vector<std::pair<SweepConfig, NoiseConfig>> points;
  points.reserve(grid.n1() * n2);
  for (std::size_t i = 0; i < grid.n1(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      SweepConfig sweep = spec.sweep;
      NoiseConfig noise = spec.noise;
      apply_parameter(spec.axis1.parameter, grid.axis1[i], sweep, noise);
      if (spec.axis2) apply_parameter(spec.axis2->parameter, grid.axis2[j], sweep, noise);
      points.emplace_back(sweep, noise);
    }
  }
  // Validate every point up front so a bad coordinate is a config error, not a numerical one.
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    try {
      points[idx].first.validate();
      points[idx].second.validate();
      if (spec.engine.engine == Engine::multijump && !(points[idx].second.frequency > 0.0)) {
        throw ConfigError("multijump engine needs noise frequency > 0");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " at " + to_string(spec.axis1.parameter) + "=" +
                        format_double(grid.axis1[idx / n2]) +
                        (spec.axis2 ? std::string(", ") + to_string(spec.axis2->parameter) + "=" +
                                          format_double(grid.axis2[idx % n2])
                                    : std::string()));
    }
  }

  const auto np = static_cast<std::size_t>(spec.phases.n_phases);
  const std::size_t total = points.size() * np;
  std::vector<double> samples(total);
  std::atomic<std::size_t> done{0};
  parallel_for(total, options.workers, [&](std::size_t task) {
    const std::size_t p = task / np;
    const int k = static_cast<int>(task % np);
    try {
      samples[task] = evaluate_phase(points[p].first, points[p].second, spec.phases, k, spec.engine);
    } catch (const std::exception& e) {
      const double c1 = grid.axis1[p / n2];
      std::optional<double> c2;
      std::string where = std::string(to_string(spec.axis1.parameter)) + "=" + format_double(c1);
      if (spec.axis2) {
        c2 = grid.axis2[p % n2];
        where += std::string(", ") + to_string(spec.axis2->parameter) + "=" + format_double(*c2);
      }
      throw ScanError(c1, c2, "scan point " + where + " failed: " + e.what());
    }
    if (options.progress) options.progress(done.fetch_add(1) + 1, total);
  });

  grid.values.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    grid.values[p] = ordered_mean(samples.data() + p * np, spec.phases.n_phases);
  }
  return grid;
}

void write_grid_csv(std::ostream& os, const EfficiencyGrid& grid) {
  os << "axis1,axis2,pe\n";
  for (std::size_t i = 0; i < grid.n1(); ++i) {
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      os << format_double(grid.axis1[i]) << ',';
      if (!grid.axis2.empty()) os << format_double(grid.axis2[j]);
      os << ',' << format_double(grid.at(i, j)) << '\n';
    }
  }
}

namespace {

nlohmann::ordered_json axis_json(const ScanAxis& a) {
  return {{"parameter", to_string(a.parameter)}, {"start", a.start}, {"stop", a.stop}, {"n_points", a.n_points}};
}

}  // namespace

std::string grid_metadata_json(const EfficiencyGrid& grid) {
  const ScanSpec& s = grid.spec;
  nlohmann::ordered_json j;
  j["artifact"] = "arpsim";
  j["version"] = grid.version;
  j["units"] = "frequencies in Rabi-frequency units, times in inverse Rabi frequency";
  j["axis1"] = axis_json(s.axis1);
  j["axis2"] = s.axis2 ? axis_json(*s.axis2) : nlohmann::ordered_json(nullptr);
  j["sweep"] = {{"rabi_frequency", s.sweep.rabi_frequency},
                {"sweep_rate", s.sweep.sweep_rate},
                {"detuning_start", s.sweep.detuning_start},
                {"detuning_end", s.sweep.detuning_end}};
  j["noise"] = {{"amplitude", s.noise.amplitude}, {"frequency", s.noise.frequency}};
  j["phases"] = {{"n_phases", s.phases.n_phases}, {"grid", "phi_k = 2 pi k / n_phases"}};
  j["engine"] = to_string(s.engine.engine);
  j["integrator"] = {{"method", to_string(s.engine.integrator.method)},
                     {"frame", to_string(s.engine.integrator.frame)},
                     {"rel_tol", s.engine.integrator.rel_tol},
                     {"abs_tol", s.engine.integrator.abs_tol},
                     {"steps_per_fastest_period", s.engine.integrator.steps_per_fastest_period}};
  j["multijump"] = {{"m_max", s.engine.multijump.m_max},
                    {"mode", to_string(s.engine.multijump.mode)},
                    {"crossing_phase", to_string(s.engine.multijump.crossing_phase)},
                    {"sideband_phase_offset", s.engine.multijump.sideband_phase_offset}};
  j["csv"] = {{"columns", {"axis1", "axis2", "pe"}}, {"layout", "long form, axis1 major"}};
  return j.dump(2) + "\n";
}

PeakSpacing peak_spacing(std::span<const double> coordinates, std::span<const double> values, bool smooth) {
  if (coordinates.size() != values.size()) throw std::invalid_argument("peak_spacing: size mismatch");
  std::vector<double> y(values.begin(), values.end());
  if (smooth && y.size() >= 3) {
    for (std::size_t i = 1; i + 1 < values.size(); ++i) y[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
  }
  PeakSpacing out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) {
      out.peak_indices.push_back(i);
      out.peak_positions.push_back(coordinates[i]);
    }
  }
  if (out.peak_indices.size() < 2) throw NoSpacingError("peak_spacing: fewer than two local maxima");
  for (std::size_t k = 1; k < out.peak_positions.size(); ++k) {
    out.spacings.push_back(out.peak_positions[k] - out.peak_positions[k - 1]);
  }
  double sum = 0.0;
  for (double s : out.spacings) sum += s;
  out.mean_spacing = sum / static_cast<double>(out.spacings.size());
  return out;
}

}  // namespace arpsim
