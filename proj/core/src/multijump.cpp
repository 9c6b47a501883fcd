#include "arpsim/multijump.hpp"

#include <algorithm>
#include <cmath>

#include "arpsim/special_functions.hpp"

namespace arpsim {

Matrix2 Matrix2::operator*(const Matrix2& o) const {
  return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11, m10 * o.m00 + m11 * o.m10,
          m10 * o.m01 + m11 * o.m11};
}

StateVector Matrix2::operator*(const StateVector& s) const {
  return {m00 * s.ground + m01 * s.excited, m10 * s.ground + m11 * s.excited};
}

Matrix2 Matrix2::adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }

double Matrix2::unitarity_defect() const {
  const Matrix2 p = adjoint() * *this;
  return std::max({std::abs(p.m00 - 1.0), std::abs(p.m01), std::abs(p.m10), std::abs(p.m11 - 1.0)});
}

const char* to_string(CrossingPhase c) { return c == CrossingPhase::diabatic_limit ? "diabatic_limit" : "stokes"; }

CrossingPhase parse_crossing_phase(const std::string& s) {
  if (s == "diabatic_limit") return CrossingPhase::diabatic_limit;
  if (s == "stokes") return CrossingPhase::stokes;
  throw ConfigError("unknown crossing phase '" + s + "'");
}

const char* to_string(MultiJumpMode m) { return m == MultiJumpMode::full ? "full" : "three_order"; }

MultiJumpMode parse_multijump_mode(const std::string& s) {
  if (s == "full") return MultiJumpMode::full;
  if (s == "three_order") return MultiJumpMode::three_order;
  throw ConfigError("unknown multijump mode '" + s + "'");
}

int default_order_cutoff(const SweepConfig& sweep, const NoiseConfig& noise) {
  if (!(noise.frequency > 0.0)) throw ConfigError("multijump: noise frequency must be > 0");
  const double reach = std::max(std::abs(sweep.detuning_start), std::abs(sweep.detuning_end));
  return static_cast<int>(std::ceil(reach / noise.frequency)) + 2;
}

JumpSchedule build_schedule(const SweepConfig& sweep, const NoiseConfig& noise_in, int m_max,
                            double sideband_phase_offset, CrossingPhase crossing_phase) {
  sweep.validate();
  noise_in.validate();
  if (!(noise_in.frequency > 0.0)) {
    throw ConfigError("multijump: noise frequency must be > 0 (no discrete resonances otherwise)");
  }
  if (m_max < 1) throw ConfigError("multijump: m_max must be >= 1");
  const NoiseConfig noise = noise_in.normalized();
  JumpSchedule sch;
  sch.noise_frequency = noise.frequency;
  sch.noise_phase = noise.phase;
  sch.sideband_phase_offset = sideband_phase_offset;
  sch.crossing_phase = crossing_phase;
  const double z = noise.amplitude / noise.frequency;
  for (int m = -m_max; m <= m_max; ++m) {
    const double resonance = m * noise.frequency;
    if (resonance < sweep.detuning_start || resonance > sweep.detuning_end) continue;
    sch.orders.push_back(m);
    sch.times.push_back(resonance / sweep.sweep_rate);
    sch.sideband_rabi.push_back(sweep.rabi_frequency * special::bessel_j(m, z));
  }
  return sch;
}

double stokes_phase(double kappa) {
  if (kappa <= 0.0) return 0.25 * kPi;
  return 0.25 * kPi + kappa * (std::log(kappa) - 1.0) + special::arg_gamma_one_minus_i(kappa);
}

Matrix2 jump_unitary(int order, const JumpSchedule& schedule, const SweepConfig& sweep) {
  const auto it = std::find(schedule.orders.begin(), schedule.orders.end(), order);
  if (it == schedule.orders.end()) throw ConfigError("jump_unitary: order not in schedule");
  const auto i = static_cast<std::size_t>(it - schedule.orders.begin());
  const double coupling = schedule.sideband_rabi[i];
  const double c2 = coupling * coupling;
  const double p = std::exp(-kPi * c2 / (2.0 * sweep.sweep_rate));
  const double kappa = c2 / (4.0 * sweep.sweep_rate);
  const double chi = schedule.crossing_phase == CrossingPhase::stokes ? stokes_phase(kappa) : 0.25 * kPi;
  double beta = 0.5 * kPi + chi -
                order * (schedule.noise_frequency * schedule.times[i] + schedule.noise_phase +
                         schedule.sideband_phase_offset);
  if (coupling < 0.0) beta += kPi;
  const double pass = std::sqrt(p);
  const double flip = std::sqrt(-std::expm1(-kPi * c2 / (2.0 * sweep.sweep_rate)));
  const Complex phase = std::polar(1.0, beta);
  return {Complex(pass, 0.0), -phase * flip, std::conj(phase) * flip, Complex(pass, 0.0)};
}

Matrix2 free_evolution(double t_a, double t_b, const SweepConfig& sweep) {
  Matrix2 f;
  f.m11 = std::polar(1.0, 0.5 * sweep.sweep_rate * (t_b - t_a) * (t_b + t_a));
  return f;
}

MultiJumpEvolution multijump_evolve(const SweepConfig& sweep, const NoiseConfig& noise,
                                    const MultiJumpOptions& options) {
  int m_max = options.m_max > 0 ? options.m_max : default_order_cutoff(sweep, noise);
  if (options.mode == MultiJumpMode::three_order) m_max = 1;
  MultiJumpEvolution ev;
  ev.schedule = build_schedule(sweep, noise, m_max, options.sideband_phase_offset, options.crossing_phase);
  Matrix2 u = Matrix2::identity();
  StateVector psi;
  double t = sweep.start_time();
  for (std::size_t i = 0; i < ev.schedule.size(); ++i) {
    const Matrix2 step = jump_unitary(ev.schedule.orders[i], ev.schedule, sweep) *
                         free_evolution(t, ev.schedule.times[i], sweep);
    u = step * u;
    psi = step * psi;
    ev.populations_after_jump.push_back(psi.excited_population());
    t = ev.schedule.times[i];
  }
  const Matrix2 tail = free_evolution(t, sweep.end_time(), sweep);
  ev.propagator = tail * u;
  ev.final_state = tail * psi;
  return ev;
}

double multijump_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const MultiJumpOptions& options) {
  return std::clamp(multijump_evolve(sweep, noise, options).final_state.excited_population(), 0.0, 1.0);
}

}  // namespace arpsim
