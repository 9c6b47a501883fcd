#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "arpsim/analytic.hpp"
#include "arpsim/dynamics.hpp"
#include "oracle.hpp"

using namespace arpsim;

namespace {

double oracle_pe(const SweepConfig& s, const NoiseConfig& n, double h = 2.5e-4) {
  const auto r = oracle::propagate(s.rabi_frequency, s.sweep_rate, n.amplitude, n.frequency, n.phase, s.start_time(),
                                   s.end_time(), h);
  return std::norm(r.excited);
}

}  // namespace

TEST_CASE("no coupling means no transfer") {
  const SweepConfig sweep{1e-12, 0.2, -10.0, 10.0};
  for (const NoiseConfig& n : {NoiseConfig{}, NoiseConfig{1.0, 2.0, 0.3}}) {
    const TransferResult r = propagate(sweep, n, IntegratorSettings{});
    CHECK(r.final_excited_pop < 1e-6);
  }
}

TEST_CASE("noiseless finite-range sweep matches the reference propagator") {
  for (double rate : {0.05, 0.2, 0.4}) {
    CAPTURE(rate);
    const SweepConfig sweep{1.0, rate, -20.0, 20.0};
    const TransferResult r = propagate(sweep, NoiseConfig{}, IntegratorSettings{});
    CHECK(std::abs(r.final_excited_pop - oracle_pe(sweep, NoiseConfig{})) < 1e-6);
    CHECK(r.norm_drift <= 1e-9);
    // finite-range residual stays within a couple of 1e-3 of the infinite-range formula
    CHECK(std::abs(r.final_excited_pop - lz_transfer(1.0, rate)) < 2e-2);
  }
}

TEST_CASE("noisy sweeps match the reference propagator") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  for (const NoiseConfig& n : {NoiseConfig{1.0, 1.8, 0.0}, NoiseConfig{1.0, 2.0, 1.3}, NoiseConfig{3.0, 7.5, 4.0},
                               NoiseConfig{1.0, 15.0, 2.0}}) {
    CAPTURE(n.frequency);
    const TransferResult r = propagate(sweep, n, IntegratorSettings{});
    CHECK(std::abs(r.final_excited_pop - oracle_pe(sweep, n, 1e-4)) < 1e-6);
    CHECK(r.norm_drift <= 1e-9);
  }
}

TEST_CASE("out-of-range noise barely changes a single sweep") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const double clean = propagate(sweep, NoiseConfig{}, IntegratorSettings{}).final_excited_pop;
  const double noisy = propagate(sweep, NoiseConfig{1.0, 15.0, 0.0}, IntegratorSettings{}).final_excited_pop;
  CHECK(std::abs(clean - noisy) < 0.01);
}

TEST_CASE("both frames and both methods agree") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const NoiseConfig noise{1.0, 2.0, 0.7};
  IntegratorSettings ref;
  const double p = propagate(sweep, noise, ref).final_excited_pop;

  IntegratorSettings rk4;
  rk4.method = IntegratorMethod::fixed_rk4;
  CHECK(std::abs(propagate(sweep, noise, rk4).final_excited_pop - p) < 1e-6);

  IntegratorSettings rot;
  rot.frame = IntegrationFrame::rotating;
  const TransferResult r = propagate(sweep, noise, rot);
  CHECK(std::abs(r.final_excited_pop - p) < 1e-6);
}

TEST_CASE("phase is taken modulo 2 pi") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  // 0.5 + 2 pi is exact in binary, so normalization restores 0.5 bit for bit
  const double p = propagate(sweep, {1.0, 1.8, 0.5}, {}).final_excited_pop;
  CHECK(propagate(sweep, {1.0, 1.8, 0.5 + kTwoPi}, {}).final_excited_pop == p);
  CHECK(propagate(sweep, {1.0, 1.8, 0.5 - kTwoPi}, {}).final_excited_pop == p);
  // otherwise the only difference is the rounding of phi + 2 pi
  const double q = propagate(sweep, {1.0, 1.8, 0.4}, {}).final_excited_pop;
  CHECK(std::abs(propagate(sweep, {1.0, 1.8, 0.4 + kTwoPi}, {}).final_excited_pop - q) < 1e-12);
}

TEST_CASE("halving the step or tightening tolerance converges") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const NoiseConfig noise{1.0, 1.8, 2.0};
  IntegratorSettings rk4;
  rk4.method = IntegratorMethod::fixed_rk4;
  const double p50 = propagate(sweep, noise, rk4).final_excited_pop;
  rk4.steps_per_fastest_period = 100;
  CHECK(std::abs(propagate(sweep, noise, rk4).final_excited_pop - p50) < 1e-6);

  IntegratorSettings dp;
  const double p12 = propagate(sweep, noise, dp).final_excited_pop;
  dp.rel_tol = dp.abs_tol = 1e-13;
  CHECK(std::abs(propagate(sweep, noise, dp).final_excited_pop - p12) < 1e-6);
}

TEST_CASE("trajectory recording does not change the dynamics") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const NoiseConfig noise{1.0, 2.0, 0.0};
  const TransferResult plain = propagate(sweep, noise, {});
  CHECK_FALSE(plain.trajectory.has_value());
  const TransferResult traced = propagate_with_trajectory(sweep, noise, {});
  REQUIRE(traced.trajectory.has_value());
  CHECK(traced.final_excited_pop == plain.final_excited_pop);

  const TrajectoryRecord& tr = *traced.trajectory;
  CHECK(tr.size() == traced.steps + 1);
  CHECK(tr.states.size() == tr.size());
  CHECK(tr.bloch.size() == tr.size());
  CHECK(tr.excited_pop.size() == tr.size());
  CHECK(tr.times.front() == sweep.start_time());
  CHECK(tr.times.back() == sweep.end_time());
  CHECK(std::is_sorted(tr.times.begin(), tr.times.end()));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.excited_pop[i] == doctest::Approx(tr.states[i].excited_population()).epsilon(1e-15));
    CHECK(tr.bloch[i].length() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(tr.excited_pop.back() == doctest::Approx(plain.final_excited_pop).epsilon(1e-12));
}

TEST_CASE("record stride thins the trajectory") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  IntegratorSettings s;
  s.record_stride = 10;
  const TransferResult r = propagate(sweep, NoiseConfig{}, s);
  REQUIRE(r.trajectory.has_value());
  CHECK(r.trajectory->size() == r.steps / 10 + 1 + (r.steps % 10 != 0 ? 1 : 0));
  CHECK(r.trajectory->times.back() == sweep.end_time());
}

TEST_CASE("slow noiseless sweep climbs the bloch sphere") {
  const SweepConfig sweep{1.0, 0.05, -20.0, 20.0};
  IntegratorSettings s;
  s.record_stride = 1;
  const TransferResult r = propagate(sweep, NoiseConfig{}, s);
  const TrajectoryRecord& tr = *r.trajectory;
  CHECK(tr.bloch.front().w == -1.0);
  CHECK(tr.bloch.back().w > 0.99);
  // monotone up to the small residual oscillations
  double running_max = -1.0;
  for (const BlochVector& b : tr.bloch) {
    CHECK(b.w > running_max - 0.05);
    running_max = std::max(running_max, b.w);
  }
}

TEST_CASE("noise resonances show up as population jumps") {
  // resonances at t = m * 8 / 0.2 = 0, +-40, +-80 inside the +-100 window
  const SweepConfig sweep{1.0, 0.2, -20.0, 20.0};
  const NoiseConfig noise{5.0, 8.0, 0.0};
  IntegratorSettings s;
  s.record_stride = 1;
  const TrajectoryRecord tr = *propagate(sweep, noise, s).trajectory;
  // window averages wash out the fast oscillations
  auto mean = [&](double a, double b) {
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.times[i] < a || tr.times[i] > b) continue;
      acc += tr.excited_pop[i];
      ++n;
    }
    return acc / n;
  };
  for (double t : {-40.0, 0.0, 40.0}) {
    CAPTURE(t);
    CHECK(std::abs(mean(t + 5.0, t + 15.0) - mean(t - 15.0, t - 5.0)) > 0.1);
  }
  for (double t : {-20.0, 20.0}) {
    CAPTURE(t);
    CHECK(std::abs(mean(t + 2.0, t + 12.0) - mean(t - 12.0, t - 2.0)) < 0.05);
  }
}

TEST_CASE("adaptive step underflow is reported with time and state") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  IntegratorSettings s;
  s.rel_tol = 1e-300;
  s.abs_tol = 1e-300;
  try {
    propagate(sweep, NoiseConfig{1.0, 2.0, 0.0}, s);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.kind() == IntegrationError::Kind::step_underflow);
    CHECK(e.time() >= sweep.start_time());
    CHECK(e.time() < sweep.end_time());
    CHECK(e.state().norm_squared() == doctest::Approx(1.0));
  }
}

TEST_CASE("integrator settings validation") {
  IntegratorSettings s;
  s.steps_per_fastest_period = 19;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.record_stride = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK_THROWS_AS(propagate(SweepConfig{1.0, 0.2, 10.0, -10.0}, NoiseConfig{}, {}), ConfigError);
  CHECK(parse_integrator_method("rk4") == IntegratorMethod::fixed_rk4);
  CHECK(parse_integration_frame("rotating") == IntegrationFrame::rotating);
  CHECK_THROWS_AS(parse_integrator_method("euler"), ConfigError);
}

TEST_CASE("accumulated phase is the integral of the detuning") {
  const SweepConfig sweep{1.0, 0.3, -10.0, 10.0};
  const NoiseConfig noise{2.0, 3.0, 1.1};
  // Simpson quadrature
  const double t0 = sweep.start_time();
  for (double t : {-20.0, 0.0, 7.3, 33.0}) {
    const int n = 20000;
    const double h = (t - t0) / n;
    double s = detuning(t0, sweep, noise) + detuning(t, sweep, noise);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * detuning(t0 + k * h, sweep, noise);
    CHECK(accumulated_phase(t, sweep, noise) == doctest::Approx(s * h / 3.0).epsilon(1e-10).scale(1.0));
  }
  // small noise frequencies must not lose precision
  const NoiseConfig slow{2.0, 1e-9, 0.5};
  CHECK(accumulated_phase(10.0, sweep, slow) ==
        doctest::Approx(0.15 * (100.0 - 10000.0 / 9.0) - 2.0 * std::cos(0.5) * (10.0 + 10.0 / 0.3)).epsilon(1e-6));
}

TEST_CASE("trajectory csv layout") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const TransferResult r = propagate_with_trajectory(sweep, NoiseConfig{}, {});
  std::ostringstream os;
  write_trajectory_csv(os, *r.trajectory);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,re_cg,im_cg,re_ce,im_ce,u,v,w,pe");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == r.trajectory->size());
  CHECK(os.str().find("-50,1,0,0,0,0,0,-1,0\n") != std::string::npos);
}
