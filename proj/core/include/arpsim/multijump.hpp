#pragma once

// Multi-jump model: frequency modulation by the noise splits the drive into
// sidebands m * omega_osc with couplings Omega0 J_m(delta_osc / omega_osc). The
// chirp crosses sideband m at t_m = m omega_osc / omega_dot; each crossing is a
// Landau-Zener scattering matrix, and the state only picks up the unperturbed
// chirp phase in between.

#include <array>
#include <vector>

#include "arpsim/types.hpp"

namespace arpsim {

/// Row-major 2x2 complex matrix in the (g, e) basis.
struct Matrix2 {
  Complex m00{1.0, 0.0}, m01{0.0, 0.0}, m10{0.0, 0.0}, m11{1.0, 0.0};

  static Matrix2 identity() { return {}; }
  Matrix2 operator*(const Matrix2& o) const;
  StateVector operator*(const StateVector& s) const;
  Matrix2 adjoint() const;
  /// max |(U^dagger U - I)_ij|
  double unitarity_defect() const;
};

enum class MultiJumpMode {
  /// every sideband resonance inside the sweep window
  full,
  /// only the -1, 0, +1 resonances (the truncation behind p_min)
  three_order,
};

/// Phase carried by the flip amplitude of each crossing.
enum class CrossingPhase {
  /// pi/4 for every order: the kappa -> 0 limit, so all crossings share one phase
  diabatic_limit,
  /// full Stokes phase pi/4 + kappa (ln kappa - 1) + arg Gamma(1 - i kappa)
  stokes,
};

const char* to_string(CrossingPhase c);
CrossingPhase parse_crossing_phase(const std::string& s);
const char* to_string(MultiJumpMode m);
MultiJumpMode parse_multijump_mode(const std::string& s);

struct MultiJumpOptions {
  /// Highest sideband order considered; 0 selects default_order_cutoff.
  int m_max = 0;
  MultiJumpMode mode = MultiJumpMode::full;
  /// Extra phase added to the noise phase in every sideband factor exp(-i m (omega t_m + phi)).
  double sideband_phase_offset = 0.0;
  CrossingPhase crossing_phase = CrossingPhase::diabatic_limit;
};

struct JumpSchedule {
  std::vector<int> orders;
  std::vector<double> times;
  std::vector<double> sideband_rabi;
  double noise_frequency = 0.0;
  double noise_phase = 0.0;
  double sideband_phase_offset = 0.0;
  CrossingPhase crossing_phase = CrossingPhase::diabatic_limit;

  std::size_t size() const { return orders.size(); }
};

/// ceil(max(|Delta_start|, |Delta_end|) / omega_osc) + 2
int default_order_cutoff(const SweepConfig& sweep, const NoiseConfig& noise);

/// Throws ConfigError when omega_osc == 0 (no discrete resonances) or m_max < 1.
JumpSchedule build_schedule(const SweepConfig& sweep, const NoiseConfig& noise, int m_max,
                            double sideband_phase_offset = 0.0,
                            CrossingPhase crossing_phase = CrossingPhase::diabatic_limit);

/// pi/4 + kappa (ln kappa - 1) + arg Gamma(1 - i kappa); pi/4 at kappa = 0.
double stokes_phase(double kappa);

/// Crossing matrix for the given order, in the frame co-rotating with the
/// unperturbed chirp:
///   [[sqrt(p), -e^{i beta} sqrt(1-p)], [e^{-i beta} sqrt(1-p), sqrt(p)]]
/// p = exp(-pi Omega_m^2 / (2 omega_dot)),
/// beta = pi/2 + chi_m - m (omega_osc t_m + phi) (+ pi if Omega_m < 0), where chi_m is
/// pi/4 or stokes_phase(Omega_m^2 / (4 omega_dot)) depending on schedule.crossing_phase.
Matrix2 jump_unitary(int order, const JumpSchedule& schedule, const SweepConfig& sweep);

/// Free evolution between two instants: c_e picks up exp(i omega_dot (t_b^2 - t_a^2) / 2).
Matrix2 free_evolution(double t_a, double t_b, const SweepConfig& sweep);

struct MultiJumpEvolution {
  JumpSchedule schedule;
  /// Full propagator from sweep start to sweep end.
  Matrix2 propagator;
  /// Excited population right after each jump.
  std::vector<double> populations_after_jump;
  StateVector final_state;
};

MultiJumpEvolution multijump_evolve(const SweepConfig& sweep, const NoiseConfig& noise,
                                    const MultiJumpOptions& options = {});

/// Final excited population for the single noise phase in `noise`.
/// Phase averaging is done by the scan module.
double multijump_efficiency(const SweepConfig& sweep, const NoiseConfig& noise, const MultiJumpOptions& options = {});

}  // namespace arpsim
