#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "arpsim/analytic.hpp"
#include "arpsim/dynamics.hpp"
#include "arpsim/format.hpp"
#include "arpsim/scan.hpp"
#include "arpsim/tolerance.hpp"
#include "arpsim/version.hpp"
#include "config.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace arpsim::cli {

namespace {

ConfigFile open_config(const CommonOptions& opts) {
  if (opts.config.empty()) {
    std::istringstream empty;
    return ConfigFile::parse(empty);
  }
  return ConfigFile::load(opts.config);
}

SweepConfig read_sweep(ConfigFile& cfg) {
  const SweepConfig d;
  SweepConfig s;
  s.rabi_frequency = cfg.number("sweep", "rabi_frequency", d.rabi_frequency);
  s.sweep_rate = cfg.number("sweep", "sweep_rate", d.sweep_rate);
  s.detuning_start = cfg.number("sweep", "detuning_start", d.detuning_start);
  s.detuning_end = cfg.number("sweep", "detuning_end", d.detuning_end);
  return s;
}

NoiseConfig read_noise(ConfigFile& cfg, bool with_phase) {
  NoiseConfig n;
  n.amplitude = cfg.number("noise", "amplitude", 0.0);
  n.frequency = cfg.number("noise", "frequency", 0.0);
  if (with_phase) n.phase = cfg.number("noise", "phase", 0.0);
  return n;
}

IntegratorSettings read_integrator(ConfigFile& cfg, int default_stride) {
  const IntegratorSettings d;
  IntegratorSettings s;
  s.method = parse_integrator_method(cfg.text("integrator", "method", to_string(d.method)));
  s.frame = parse_integration_frame(cfg.text("integrator", "frame", to_string(d.frame)));
  s.rel_tol = cfg.number("integrator", "rel_tol", d.rel_tol);
  s.abs_tol = cfg.number("integrator", "abs_tol", d.abs_tol);
  s.steps_per_fastest_period = cfg.integer("integrator", "steps_per_fastest_period", d.steps_per_fastest_period);
  s.record_stride = cfg.integer("integrator", "record_stride", default_stride);
  return s;
}

MultiJumpOptions read_multijump(ConfigFile& cfg) {
  const MultiJumpOptions d;
  MultiJumpOptions m;
  m.m_max = cfg.integer("multijump", "m_max", d.m_max);
  m.mode = parse_multijump_mode(cfg.text("multijump", "mode", to_string(d.mode)));
  m.crossing_phase = parse_crossing_phase(cfg.text("multijump", "crossing_phase", to_string(d.crossing_phase)));
  m.sideband_phase_offset = cfg.number("multijump", "sideband_phase_offset", d.sideband_phase_offset);
  return m;
}

EngineSettings read_engine(ConfigFile& cfg, const std::string& section, const CommonOptions& opts) {
  EngineSettings e;
  std::string name = cfg.text(section, "engine", "full");
  if (opts.engine) {
    name = *opts.engine;
    cfg.record(section, "engine", name);
  }
  e.engine = parse_engine(name);
  e.integrator = read_integrator(cfg, 0);
  e.multijump = read_multijump(cfg);
  return e;
}

ScanAxis read_axis(ConfigFile& cfg, const std::string& section, const std::string& name, const ScanAxis& d) {
  ScanAxis a;
  a.parameter = parse_scan_parameter(cfg.text(section, name, to_string(d.parameter)));
  a.start = cfg.number(section, name + "_start", d.start);
  a.stop = cfg.number(section, name + "_stop", d.stop);
  a.n_points = cfg.integer(section, name + "_points", d.n_points);
  return a;
}

fs::path prepare_output(const CommonOptions& opts, const ConfigFile& cfg) {
  const fs::path dir(opts.out);
  fs::create_directories(dir);
  std::ofstream(dir / "config.resolved.ini") << cfg.resolved();
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

/// Per-task counter on stderr, redrawn at most once per percent.
class Progress {
 public:
  explicit Progress(std::string label) : label_(std::move(label)) {}
  ~Progress() {
    if (drawn_) std::cerr << '\n';
  }

  void operator()(std::size_t done, std::size_t total) {
    std::lock_guard lock(mu_);
    const std::size_t pct = total ? done * 100 / total : 100;
    if (drawn_ && pct == last_ && done != total) return;
    last_ = pct;
    drawn_ = true;
    std::cerr << '\r' << label_ << ' ' << done << '/' << total << std::flush;
  }

 private:
  std::mutex mu_;
  std::string label_;
  std::size_t last_ = 0;
  bool drawn_ = false;
};

std::string axis_label(ScanParameter p) {
  switch (p) {
    case ScanParameter::noise_frequency: return "noise frequency";
    case ScanParameter::noise_amplitude: return "noise amplitude";
    case ScanParameter::sweep_rate: return "sweep rate";
  }
  return "";
}

std::string grid_csv(const EfficiencyGrid& g) {
  std::ostringstream os;
  write_grid_csv(os, g);
  return os.str();
}

/// Overlays for (frequency, amplitude) maps: sqrt(2 n pi rate) columns and the J0-zero ratio line.
std::vector<Series> map_overlays(const ScanSpec& spec, const EfficiencyGrid& g, bool maxima, bool critical) {
  std::vector<Series> out;
  if (!spec.axis2 || spec.axis1.parameter != ScanParameter::noise_frequency ||
      spec.axis2->parameter != ScanParameter::noise_amplitude) {
    return out;
  }
  const double x0 = g.axis1.front(), x1 = g.axis1.back();
  const double y0 = g.axis2.front(), y1 = g.axis2.back();
  if (maxima) {
    const double rate = spec.sweep.sweep_rate;
    const int n_lo = std::max(1, static_cast<int>(std::floor(x0 * x0 / (2.0 * kPi * rate))));
    const int n_hi = static_cast<int>(std::ceil(x1 * x1 / (2.0 * kPi * rate)));
    // dense families are unreadable
    if (n_hi - n_lo <= 60) {
      for (int n = n_lo; n <= n_hi; ++n) {
        const double x = std::sqrt(2.0 * n * kPi * rate);
        if (x < x0 || x > x1) continue;
        out.push_back({{x, x}, {y0, y1}, "", "#ffffff"});
      }
    }
  }
  if (critical) {
    const double r = critical_ratio();
    out.push_back({{x0, x1}, {r * x0, r * x1}, "", "#ff4040"});
  }
  return out;
}

std::string grid_plot(const ScanSpec& spec, const EfficiencyGrid& g, const std::string& title, bool maxima,
                      bool critical, double v_min = 0.0, double v_max = 1.0) {
  if (!spec.axis2) {
    Axes a{title, axis_label(spec.axis1.parameter), "P_e", {}, {}, v_min, v_max};
    return line_chart(a, {{g.axis1, g.values, "", "#1f77b4", true, g.n1() < 60}});
  }
  Heatmap h;
  h.axes.title = title;
  h.axes.x_label = axis_label(spec.axis1.parameter);
  h.axes.y_label = axis_label(spec.axis2->parameter);
  h.x = g.axis1;
  h.y = g.axis2;
  h.values = g.values;
  h.v_min = v_min;
  h.v_max = v_max;
  h.overlays = map_overlays(spec, g, maxima, critical);
  return heatmap(h);
}

ScanSpec read_scan_spec(ConfigFile& cfg, const std::string& section, const CommonOptions& opts) {
  ScanSpec spec;
  spec.sweep = read_sweep(cfg);
  spec.noise = read_noise(cfg, false);
  spec.axis1 = read_axis(cfg, section, "axis1", {ScanParameter::noise_frequency, 0.05, 12.0, 200});
  const std::string second = cfg.text(section, "axis2", "none");
  if (second != "none") {
    spec.axis2 = read_axis(cfg, section, "axis2", {parse_scan_parameter(second), 0.0, 1.0, 2});
  }
  spec.phases.n_phases = cfg.integer(section, "n_phases", PhaseAverageSpec{}.n_phases);
  spec.engine = read_engine(cfg, section, opts);
  return spec;
}

}  // namespace

int cmd_sweep(const CommonOptions& opts) {
  ConfigFile cfg = open_config(opts);
  const SweepConfig sweep = read_sweep(cfg);
  const NoiseConfig noise = read_noise(cfg, true);
  IntegratorSettings settings = read_integrator(cfg, 1);
  cfg.reject_unused();
  sweep.validate();
  noise.validate();
  settings.validate();
  const fs::path dir = prepare_output(opts, cfg);

  const TransferResult r = propagate_with_trajectory(sweep, noise, settings);
  const TrajectoryRecord& tr = *r.trajectory;
  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  write_file(dir / "trajectory.csv", csv.str());

  if (!opts.no_plots) {
    const double tm = sweep.end_time();
    Axes pop{"Excited-state population", "time", "P_e", sweep.start_time(), tm, 0.0, 1.0};
    write_file(dir / "population.svg", line_chart(pop, {{tr.times, tr.excited_pop, "", "#1f77b4"}}));
    std::vector<double> u, v, w;
    for (const BlochVector& b : tr.bloch) {
      u.push_back(b.u);
      v.push_back(b.v);
      w.push_back(b.w);
    }
    auto panel = [](const char* t, const char* xl, const char* yl) { Axes a{t, xl, yl, -1.0, 1.0, -1.0, 1.0};
      a.square = true;
      return a;
    };
    write_file(dir / "bloch.svg", chart_row({{panel("u-v projection", "u", "v"), {{u, v, "", "#1f77b4"}}},
                                             {panel("u-w projection", "u", "w"), {{u, w, "", "#1f77b4"}}},
                                             {panel("v-w projection", "v", "w"), {{v, w, "", "#1f77b4"}}}}));
  }
  std::cout << "steps=" << r.steps << '\n';
  std::cout << "norm_drift=" << format_double(r.norm_drift) << '\n';
  std::cout << "pe=" << format_double(r.final_excited_pop) << '\n';
  return 0;
}

int cmd_scan(const CommonOptions& opts) {
  ConfigFile cfg = open_config(opts);
  const ScanSpec spec = read_scan_spec(cfg, "scan", opts);
  const bool maxima = cfg.flag("scan", "overlay_maxima", true);
  const bool critical = cfg.flag("scan", "overlay_critical_ratio", true);
  cfg.reject_unused();
  spec.validate();
  const fs::path dir = prepare_output(opts, cfg);

  Progress progress("scan");
  const EfficiencyGrid g = run_scan(spec, {opts.workers, std::ref(progress)});
  write_file(dir / "grid.csv", grid_csv(g));
  write_file(dir / "grid.json", grid_metadata_json(g));
  if (!opts.no_plots) write_file(dir / "scan.svg", grid_plot(spec, g, "Phase-averaged transfer", maxima, critical));

  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  std::cout << "points=" << g.values.size() << '\n';
  std::cout << "pe_min=" << format_double(*lo) << '\n';
  std::cout << "pe_max=" << format_double(*hi) << '\n';
  return 0;
}

int cmd_compare(const CommonOptions& opts) {
  ConfigFile cfg = open_config(opts);
  ScanSpec spec = read_scan_spec(cfg, "compare", opts);
  const bool maxima = cfg.flag("compare", "overlay_maxima", true);
  const bool critical = cfg.flag("compare", "overlay_critical_ratio", true);
  cfg.reject_unused();
  spec.engine.engine = Engine::full_simulation;
  spec.validate();
  ScanSpec mj_spec = spec;
  mj_spec.engine.engine = Engine::multijump;
  mj_spec.validate();
  const fs::path dir = prepare_output(opts, cfg);

  EfficiencyGrid full, mj;
  {
    Progress progress("full simulation");
    full = run_scan(spec, {opts.workers, std::ref(progress)});
  }
  {
    Progress progress("multijump");
    mj = run_scan(mj_spec, {opts.workers, std::ref(progress)});
  }
  EfficiencyGrid diff = mj;
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < diff.values.size(); ++k) {
    diff.values[k] = mj.values[k] - full.values[k];
    if (std::abs(diff.values[k]) > worst) {
      worst = std::abs(diff.values[k]);
      at = k;
    }
  }
  write_file(dir / "full.csv", grid_csv(full));
  write_file(dir / "multijump.csv", grid_csv(mj));
  {
    std::ostringstream os;
    os << "axis1,axis2,difference\n";
    for (std::size_t i = 0; i < diff.n1(); ++i) {
      for (std::size_t j = 0; j < diff.n2(); ++j) {
        os << format_double(diff.axis1[i]) << ',' << (diff.axis2.empty() ? "" : format_double(diff.axis2[j])) << ','
           << format_double(diff.at(i, j)) << '\n';
      }
    }
    write_file(dir / "difference.csv", os.str());
  }
  nlohmann::ordered_json meta = nlohmann::ordered_json::parse(grid_metadata_json(full));
  meta["engine"] = "full_simulation and multijump";
  meta["difference"] = "multijump - full_simulation";
  meta["max_abs_difference"] = worst;
  meta["max_abs_difference_at"] = {{"axis1", diff.axis1[at / diff.n2()]},
                                   {"axis2", diff.axis2.empty() ? nlohmann::ordered_json(nullptr)
                                                                : nlohmann::ordered_json(diff.axis2[at % diff.n2()])}};
  write_file(dir / "compare.json", meta.dump(2) + "\n");

  if (!opts.no_plots) {
    write_file(dir / "full.svg", grid_plot(spec, full, "Full simulation", maxima, critical));
    write_file(dir / "multijump.svg", grid_plot(mj_spec, mj, "Multi-jump model", maxima, critical));
    const double span = std::max(worst, 1e-12);
    write_file(dir / "difference.svg", grid_plot(spec, diff, "Multi-jump minus full", false, false, -span, span));
  }
  std::cout << "points=" << diff.values.size() << '\n';
  std::cout << "max_abs_difference=" << format_double(worst) << '\n';
  return 0;
}

int cmd_tolerance(const CommonOptions& opts) {
  ConfigFile cfg = open_config(opts);
  const SweepConfig sweep = read_sweep(cfg);
  ToleranceOptions o;
  o.threshold = cfg.number("tolerance", "threshold", o.threshold);
  o.amplitude_step = cfg.number("tolerance", "amplitude_step", o.amplitude_step);
  o.amplitude_step_fraction = cfg.number("tolerance", "amplitude_step_fraction", o.amplitude_step_fraction);
  o.ceiling_factor = cfg.number("tolerance", "ceiling_factor", o.ceiling_factor);
  o.convention = parse_amplitude_convention(cfg.text("tolerance", "convention", to_string(o.convention)));
  o.phases.n_phases = cfg.integer("tolerance", "n_phases", o.phases.n_phases);
  o.engine = read_engine(cfg, "tolerance", opts);
  const std::vector<double> rates = cfg.numbers("tolerance", "sweep_rates", {sweep.sweep_rate});
  const double reach = std::max(std::abs(sweep.detuning_start), std::abs(sweep.detuning_end));
  const double f_lo = cfg.number("tolerance", "frequency_start", 0.2);
  const double f_hi = cfg.number("tolerance", "frequency_stop", 1.2 * reach);
  const int f_n = cfg.integer("tolerance", "frequency_points", 200);
  cfg.reject_unused();
  sweep.validate();
  o.validate();
  if (f_n < 1 || !(f_lo >= 0.0) || !(f_hi > f_lo)) throw ConfigError("tolerance: bad frequency grid");
  for (double r : rates) {
    if (!(r > 0.0)) throw ConfigError("tolerance: sweep rates must be > 0");
  }
  // (start, stop]: the lower end itself is excluded
  std::vector<double> freqs(static_cast<std::size_t>(f_n));
  for (int i = 0; i < f_n; ++i) freqs[i] = f_lo + (f_hi - f_lo) * (i + 1) / f_n;
  const fs::path dir = prepare_output(opts, cfg);

  BoundarySlopeResult result;
  result.threshold = o.threshold;
  const ThresholdSpec x(o.threshold);
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (double rate : rates) {
    SweepConfig s = sweep;
    s.sweep_rate = rate;
    std::cerr << "tolerance rate=" << format_double(rate) << ": " << freqs.size() << " frequencies\n";
    const ToleranceCurve curve = tolerance_curve(freqs, s, o, opts.workers);
    const std::string stem = "curve_rate_" + format_double(rate);
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    write_file(dir / (stem + ".csv"), csv.str());

    const double analytic = s_sufficient(x, rate, s.rabi_frequency, SlopeVariant::printed);
    const double analytic_re = s_sufficient(x, rate, s.rabi_frequency, SlopeVariant::rederived);
    std::optional<double> empirical;
    if (curve.frequencies.size() >= 5) empirical = empirical_sufficient_slope(curve);
    if (empirical) {
      result.sweep_rates.push_back(rate);
      result.empirical_slopes.push_back(*empirical);
      result.analytic_slopes.push_back(analytic);
      result.analytic_slopes_rederived.push_back(analytic_re);
    }
    curves.push_back({{"sweep_rate", rate},
                      {"file", stem + ".csv"},
                      {"empirical_slope", empirical ? nlohmann::ordered_json(*empirical) : nlohmann::ordered_json(nullptr)},
                      {"analytic_slope_printed", analytic},
                      {"analytic_slope_rederived", analytic_re}});

    if (!opts.no_plots) {
      const double top = f_hi;
      std::vector<Series> series{{curve.frequencies, curve.max_amplitudes, "max amplitude", "#1f77b4",
                                  false, true}};
      if (empirical) series.push_back({{0.0, top}, {0.0, *empirical * top}, "empirical boundary", "#2ca02c"});
      series.push_back({{0.0, top}, {0.0, analytic * top}, "analytic boundary", "#ff7f0e"});
      Axes a{"Noise tolerance, sweep rate " + format_double(rate), "noise frequency", "noise amplitude", 0.0, top,
             0.0, std::nullopt};
      write_file(dir / (stem + ".svg"), line_chart(a, series));
    }
    std::cout << "rate=" << format_double(rate) << " empirical_slope="
              << (empirical ? format_double(*empirical) : std::string("n/a"))
              << " analytic_slope=" << format_double(analytic) << '\n';
  }

  nlohmann::ordered_json meta;
  meta["artifact"] = "arpsim";
  meta["version"] = kVersion;
  meta["threshold"] = o.threshold;
  meta["convention"] = to_string(o.convention);
  meta["engine"] = to_string(o.engine.engine);
  meta["n_phases"] = o.phases.n_phases;
  meta["amplitude_step"] = o.amplitude_step > 0.0 ? nlohmann::ordered_json(o.amplitude_step)
                                                  : nlohmann::ordered_json("noise_frequency * " +
                                                                           format_double(o.amplitude_step_fraction));
  meta["ceiling"] = "noise_frequency * " + format_double(o.ceiling_factor);
  meta["frequency_grid"] = {{"start_exclusive", f_lo}, {"stop", f_hi}, {"points", f_n}};
  meta["sweep"] = {{"rabi_frequency", sweep.rabi_frequency},
                   {"detuning_start", sweep.detuning_start},
                   {"detuning_end", sweep.detuning_end}};
  meta["curves"] = curves;
  if (!result.sweep_rates.empty()) {
    std::ostringstream csv;
    write_slopes_csv(csv, result);
    write_file(dir / "slopes.csv", csv.str());
    const VariantVerdict v = compare_slope_variants(result);
    meta["variant_verdict"] = {{"best", to_string(v.best)},
                               {"printed_sufficient", v.printed_sufficient},
                               {"rederived_sufficient", v.rederived_sufficient},
                               {"printed_log_distance", v.printed_log_distance},
                               {"rederived_log_distance", v.rederived_log_distance}};
    std::cout << "variant=" << to_string(v.best) << '\n';
    if (!opts.no_plots && result.sweep_rates.size() > 1) {
      Axes a{"Boundary slope vs sweep rate", "sweep rate", "slope", std::nullopt, std::nullopt, std::nullopt,
             std::nullopt, true, true};
      write_file(dir / "slopes.svg",
                 line_chart(a, {{result.sweep_rates, result.empirical_slopes, "empirical", "#1f77b4", false, true},
                                {result.sweep_rates, result.analytic_slopes, "analytic", "#ff7f0e"},
                                {result.sweep_rates, result.analytic_slopes_rederived, "analytic (other root)",
                                 "#9467bd"}}));
    }
  }
  write_file(dir / "tolerance.json", meta.dump(2) + "\n");
  return 0;
}

int cmd_lz(const CommonOptions& opts, std::optional<double> rabi, std::optional<double> rate) {
  ConfigFile cfg = open_config(opts);
  SweepConfig s = read_sweep(cfg);
  cfg.reject_unused();
  if (rabi) s.rabi_frequency = *rabi;
  if (rate) s.sweep_rate = *rate;
  s.validate();
  std::cout << "rabi_frequency=" << format_double(s.rabi_frequency) << '\n';
  std::cout << "sweep_rate=" << format_double(s.sweep_rate) << '\n';
  std::cout << "p_lost=" << format_double(lz_lost(s.rabi_frequency, s.sweep_rate)) << '\n';
  std::cout << "p_transfer=" << format_double(lz_transfer(s.rabi_frequency, s.sweep_rate)) << '\n';
  return 0;
}

}  // namespace arpsim::cli
