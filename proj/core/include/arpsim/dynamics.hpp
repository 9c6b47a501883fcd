#pragma once

// Time-dependent Schroedinger propagation for
//   H(t) = [[0, Omega0/2], [Omega0/2, -Delta(t)]]   in the (g, e) basis,
// starting from the ground state at the beginning of the sweep window.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arpsim/types.hpp"

namespace arpsim {

enum class IntegratorMethod { fixed_rk4, adaptive_rk45 };

/// Frame whose amplitudes are integrated. Both give the same populations.
///  - interaction: c_e = a_e exp(i Theta(t)), Theta = integral of Delta, evaluated in
///    closed form, so the integrator only sees the weak coupling term.
///  - rotating: c_g, c_e directly.
enum class IntegrationFrame { interaction, rotating };

const char* to_string(IntegratorMethod m);
const char* to_string(IntegrationFrame f);
IntegratorMethod parse_integrator_method(const std::string& s);
IntegrationFrame parse_integration_frame(const std::string& s);

struct IntegratorSettings {
  IntegratorMethod method = IntegratorMethod::adaptive_rk45;
  IntegrationFrame frame = IntegrationFrame::interaction;
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  int steps_per_fastest_period = 50;
  /// Record every n-th accepted step; 0 disables trajectory recording.
  int record_stride = 0;

  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<BlochVector> bloch;
  std::vector<double> excited_pop;

  std::size_t size() const { return times.size(); }
};

struct TransferResult {
  double final_excited_pop = 0.0;
  /// max over accepted steps of | |psi|^2 - 1 |
  double norm_drift = 0.0;
  std::size_t steps = 0;
  std::optional<TrajectoryRecord> trajectory;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { step_underflow, diverged };

  IntegrationError(Kind kind, double time, StateVector state, const std::string& what)
      : std::runtime_error(what), kind_(kind), time_(time), state_(state) {}

  Kind kind() const { return kind_; }
  double time() const { return time_; }
  const StateVector& state() const { return state_; }

 private:
  Kind kind_;
  double time_;
  StateVector state_;
};

/// Fastest angular frequency the integrator has to resolve:
/// max(Omega0, |Delta_start|, |Delta_end|, omega_osc) + delta_osc.
double fastest_frequency(const SweepConfig& sweep, const NoiseConfig& noise);

/// Target fixed step (2 pi / fastest_frequency) / steps_per_fastest_period.
double fixed_step_size(const SweepConfig& sweep, const NoiseConfig& noise, const IntegratorSettings& settings);

/// Integral of Delta(t') from sweep start to t, in closed form.
double accumulated_phase(double t, const SweepConfig& sweep, const NoiseConfig& noise);

TransferResult propagate(const SweepConfig& sweep, const NoiseConfig& noise, const IntegratorSettings& settings);

/// As propagate, with record_stride forced to at least 1.
TransferResult propagate_with_trajectory(const SweepConfig& sweep, const NoiseConfig& noise,
                                         const IntegratorSettings& settings);

/// Header `t,re_cg,im_cg,re_ce,im_ce,u,v,w,pe`, one row per recorded step.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& trajectory);

}  // namespace arpsim
