#include "arpsim/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "arpsim/format.hpp"

namespace arpsim {

namespace {

using State4 = std::array<double, 4>;  // Re g, Im g, Re e, Im e

// Closed-form phase integral shared by the interaction-frame RHS and the
// frame conversion.
class PhaseIntegral {
 public:
  PhaseIntegral(const SweepConfig& sweep, const NoiseConfig& noise)
      : rate_(sweep.sweep_rate),
        t0_(sweep.start_time()),
        amp_(noise.amplitude),
        freq_(noise.frequency),
        phase_(noise.phase) {}

  double operator()(double t) const {
    const double dt = t - t0_;
    double value = 0.5 * rate_ * dt * (t + t0_);
    if (amp_ != 0.0) {
      // sin(w t + p) - sin(w t0 + p) = dt w cos(w (t + t0)/2 + p) sinc(w dt / 2)
      const double half = 0.5 * freq_ * dt;
      const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
      value -= amp_ * dt * std::cos(0.5 * freq_ * (t + t0_) + phase_) * sinc;
    }
    return value;
  }

 private:
  double rate_, t0_, amp_, freq_, phase_;
};

class InteractionRhs {
 public:
  InteractionRhs(const SweepConfig& sweep, const NoiseConfig& noise)
      : half_rabi_(0.5 * sweep.rabi_frequency), theta_(sweep, noise) {}

  // a_g' = -i k e^{i theta} a_e,  a_e' = -i k e^{-i theta} a_g
  void operator()(double t, const State4& y, State4& dy) const {
    const double th = theta_(t);
    const double c = half_rabi_ * std::cos(th);
    const double s = half_rabi_ * std::sin(th);
    // k e^{i th} a_e = (c + i s)(x + i y)
    const double pr = c * y[2] - s * y[3];
    const double pi = c * y[3] + s * y[2];
    dy[0] = pi;
    dy[1] = -pr;
    // k e^{-i th} a_g = (c - i s)(x + i y)
    const double qr = c * y[0] + s * y[1];
    const double qi = c * y[1] - s * y[0];
    dy[2] = qi;
    dy[3] = -qr;
  }

 private:
  double half_rabi_;
  PhaseIntegral theta_;
};

class RotatingRhs {
 public:
  RotatingRhs(const SweepConfig& sweep, const NoiseConfig& noise)
      : half_rabi_(0.5 * sweep.rabi_frequency), sweep_(sweep), noise_(noise) {}

  // c_g' = -i k c_e,  c_e' = -i k c_g + i Delta c_e
  void operator()(double t, const State4& y, State4& dy) const {
    const double d = detuning(t, sweep_, noise_);
    dy[0] = half_rabi_ * y[3];
    dy[1] = -half_rabi_ * y[2];
    dy[2] = half_rabi_ * y[1] - d * y[3];
    dy[3] = -half_rabi_ * y[0] + d * y[2];
  }

 private:
  double half_rabi_;
  SweepConfig sweep_;
  NoiseConfig noise_;
};

double norm2(const State4& y) { return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]; }

bool all_finite(const State4& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Maps integrated amplitudes back to rotating-frame amplitudes.
class FrameMap {
 public:
  FrameMap(IntegrationFrame frame, const SweepConfig& sweep, const NoiseConfig& noise)
      : frame_(frame), theta_(sweep, noise) {}

  StateVector to_state(double t, const State4& y) const {
    StateVector s{{y[0], y[1]}, {y[2], y[3]}};
    if (frame_ == IntegrationFrame::interaction) s.excited *= std::polar(1.0, theta_(t));
    return s;
  }

 private:
  IntegrationFrame frame_;
  PhaseIntegral theta_;
};

class Recorder {
 public:
  Recorder(int stride, const FrameMap& map) : stride_(stride), map_(map) {}

  void observe(std::size_t step, double t, const State4& y, bool last) {
    if (stride_ <= 0) return;
    if (step % static_cast<std::size_t>(stride_) != 0 && !last) return;
    if (!record_.times.empty() && record_.times.back() == t) return;
    const StateVector s = map_.to_state(t, y);
    record_.times.push_back(t);
    record_.states.push_back(s);
    // drift is reported separately; normalize only for the geometric view
    const double n = std::sqrt(s.norm_squared());
    record_.bloch.push_back(bloch_from_state({s.ground / n, s.excited / n}));
    record_.excited_pop.push_back(std::clamp(s.excited_population(), 0.0, 1.0));
  }

  std::optional<TrajectoryRecord> take() {
    if (stride_ <= 0) return std::nullopt;
    return std::move(record_);
  }

 private:
  int stride_;
  const FrameMap& map_;
  TrajectoryRecord record_;
};

[[noreturn]] void diverged(double t, const FrameMap& map, const State4& y) {
  throw IntegrationError(IntegrationError::Kind::diverged, t, map.to_state(t, y),
                         "integration diverged at t=" + format_double(t));
}

template <class Rhs>
TransferResult integrate_rk4(const Rhs& rhs, double t0, double t1, double h_target, const FrameMap& map,
                             Recorder& rec) {
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / h_target));
  const double h = (t1 - t0) / static_cast<double>(n);
  State4 y{1.0, 0.0, 0.0, 0.0};
  State4 k1, k2, k3, k4, tmp;
  double drift = 0.0;
  rec.observe(0, t0, y, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    rhs(t, y, k1);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    rhs(t + 0.5 * h, tmp, k2);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    rhs(t + 0.5 * h, tmp, k3);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
    rhs(t + h, tmp, k4);
    for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    const double t_next = i + 1 == n ? t1 : t0 + static_cast<double>(i + 1) * h;
    if (!all_finite(y)) diverged(t_next, map, y);
    drift = std::max(drift, std::abs(norm2(y) - 1.0));
    rec.observe(i + 1, t_next, y, i + 1 == n);
  }
  TransferResult r;
  r.final_excited_pop = std::clamp(map.to_state(t1, y).excited_population(), 0.0, 1.0);
  r.norm_drift = drift;
  r.steps = n;
  return r;
}

// Dormand-Prince 5(4) with FSAL and local extrapolation.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, coefficients of the embedded error estimate
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

template <class Rhs>
TransferResult integrate_dp45(const Rhs& rhs, double t0, double t1, double h_init, double h_max,
                              const IntegratorSettings& settings, const FrameMap& map, Recorder& rec) {
  using namespace dp;
  State4 y{1.0, 0.0, 0.0, 0.0};
  State4 k1, k2, k3, k4, k5, k6, k7, tmp, y_new;
  double t = t0;
  double h = std::min(h_init, h_max);
  double drift = 0.0;
  std::size_t accepted = 0;
  rec.observe(0, t0, y, false);
  rhs(t, y, k1);
  while (t < t1) {
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw IntegrationError(IntegrationError::Kind::step_underflow, t, map.to_state(t, y),
                             "adaptive step size underflow at t=" + format_double(t));
    }
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * a21 * k1[j];
    rhs(t + c2 * h, tmp, k2);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * (a31 * k1[j] + a32 * k2[j]);
    rhs(t + c3 * h, tmp, k3);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * (a41 * k1[j] + a42 * k2[j] + a43 * k3[j]);
    rhs(t + c4 * h, tmp, k4);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * (a51 * k1[j] + a52 * k2[j] + a53 * k3[j] + a54 * k4[j]);
    rhs(t + c5 * h, tmp, k5);
    for (int j = 0; j < 4; ++j)
      tmp[j] = y[j] + h * (a61 * k1[j] + a62 * k2[j] + a63 * k3[j] + a64 * k4[j] + a65 * k5[j]);
    const double t_next = last ? t1 : t + h;
    rhs(t_next, tmp, k6);
    for (int j = 0; j < 4; ++j)
      y_new[j] = y[j] + h * (b1 * k1[j] + b3 * k3[j] + b4 * k4[j] + b5 * k5[j] + b6 * k6[j]);
    rhs(t_next, y_new, k7);

    double err = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double e = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] + e6 * k6[j] + e7 * k7[j]);
      const double scale = settings.abs_tol + settings.rel_tol * std::max(std::abs(y[j]), std::abs(y_new[j]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / 4.0);
    if (!all_finite(y_new)) diverged(t_next, map, y_new);
    // an overflowing error norm with a finite state is just a rejected step
    if (!std::isfinite(err)) err = std::numeric_limits<double>::max();

    if (err <= 1.0) {
      t = t_next;
      y = y_new;
      k1 = k7;
      ++accepted;
      drift = std::max(drift, std::abs(norm2(y) - 1.0));
      rec.observe(accepted, t, y, last);
      if (last) break;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(h * factor, h_max);
  }
  TransferResult r;
  r.final_excited_pop = std::clamp(map.to_state(t1, y).excited_population(), 0.0, 1.0);
  r.norm_drift = drift;
  r.steps = accepted;
  return r;
}

template <class Rhs>
TransferResult run(const Rhs& rhs, const SweepConfig& sweep, const NoiseConfig& noise,
                   const IntegratorSettings& settings) {
  const FrameMap map(settings.frame, sweep, noise);
  Recorder rec(settings.record_stride, map);
  const double t0 = sweep.start_time();
  const double t1 = sweep.end_time();
  const double h = fixed_step_size(sweep, noise, settings);
  TransferResult r;
  if (settings.method == IntegratorMethod::fixed_rk4) {
    r = integrate_rk4(rhs, t0, t1, h, map, rec);
  } else {
    r = integrate_dp45(rhs, t0, t1, h / 10.0, kTwoPi / fastest_frequency(sweep, noise), settings, map, rec);
  }
  r.trajectory = rec.take();
  return r;
}

}  // namespace

const char* to_string(IntegratorMethod m) {
  return m == IntegratorMethod::fixed_rk4 ? "fixed_rk4" : "adaptive_rk45";
}

const char* to_string(IntegrationFrame f) {
  return f == IntegrationFrame::interaction ? "interaction" : "rotating";
}

IntegratorMethod parse_integrator_method(const std::string& s) {
  if (s == "fixed_rk4" || s == "rk4") return IntegratorMethod::fixed_rk4;
  if (s == "adaptive_rk45" || s == "rk45") return IntegratorMethod::adaptive_rk45;
  throw ConfigError("unknown integrator method '" + s + "'");
}

IntegrationFrame parse_integration_frame(const std::string& s) {
  if (s == "interaction") return IntegrationFrame::interaction;
  if (s == "rotating") return IntegrationFrame::rotating;
  throw ConfigError("unknown integration frame '" + s + "'");
}

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator: tolerances must be > 0");
  if (steps_per_fastest_period < 20) throw ConfigError("integrator: steps_per_fastest_period must be >= 20");
  if (record_stride < 0) throw ConfigError("integrator: record_stride must be >= 0");
}

double fastest_frequency(const SweepConfig& sweep, const NoiseConfig& noise) {
  return std::max({sweep.rabi_frequency, std::abs(sweep.detuning_start), std::abs(sweep.detuning_end),
                   noise.frequency}) +
         noise.amplitude;
}

double fixed_step_size(const SweepConfig& sweep, const NoiseConfig& noise, const IntegratorSettings& settings) {
  return kTwoPi / fastest_frequency(sweep, noise) / settings.steps_per_fastest_period;
}

double accumulated_phase(double t, const SweepConfig& sweep, const NoiseConfig& noise) {
  return PhaseIntegral(sweep, noise)(t);
}

TransferResult propagate(const SweepConfig& sweep, const NoiseConfig& noise_in, const IntegratorSettings& settings) {
  sweep.validate();
  noise_in.validate();
  settings.validate();
  const NoiseConfig noise = noise_in.normalized();
  if (settings.frame == IntegrationFrame::interaction) return run(InteractionRhs(sweep, noise), sweep, noise, settings);
  return run(RotatingRhs(sweep, noise), sweep, noise, settings);
}

TransferResult propagate_with_trajectory(const SweepConfig& sweep, const NoiseConfig& noise,
                                         const IntegratorSettings& settings) {
  IntegratorSettings s = settings;
  s.record_stride = std::max(1, s.record_stride);
  return propagate(sweep, noise, s);
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& tr) {
  os << "t,re_cg,im_cg,re_ce,im_ce,u,v,w,pe\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& s = tr.states[i];
    const auto& b = tr.bloch[i];
    os << format_double(tr.times[i]) << ',' << format_double(s.ground.real()) << ','
       << format_double(s.ground.imag()) << ',' << format_double(s.excited.real()) << ','
       << format_double(s.excited.imag()) << ',' << format_double(b.u) << ',' << format_double(b.v) << ','
       << format_double(b.w) << ',' << format_double(tr.excited_pop[i]) << '\n';
  }
}

}  // namespace arpsim
