#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arpsim/analytic.hpp"
#include "arpsim/multijump.hpp"
#include "arpsim/scan.hpp"

using namespace arpsim;

namespace {

std::vector<int> orders(const SweepConfig& s, const NoiseConfig& n) {
  return build_schedule(s, n, default_order_cutoff(s, n)).orders;
}

double averaged(const SweepConfig& s, NoiseConfig n, int phases = 16) {
  double acc = 0.0;
  for (int k = 0; k < phases; ++k) acc += multijump_efficiency(s, n.with_phase(kTwoPi * k / phases));
  return acc / phases;
}

}  // namespace

TEST_CASE("schedule covers the resonances inside the window") {
  CHECK(orders({1.0, 0.2, -10.0, 10.0}, {1.0, 15.0, 0.0}) == std::vector<int>{0});
  CHECK(orders({1.0, 0.2, -20.0, 20.0}, {1.0, 15.0, 0.0}) == std::vector<int>{-1, 0, 1});
  const JumpSchedule s = build_schedule({1.0, 0.4, -20.0, 20.0}, {5.0, 8.6, 0.0}, 10);
  CHECK(s.orders == std::vector<int>{-2, -1, 0, 1, 2});
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.times[i] == doctest::Approx(s.orders[i] * 8.6 / 0.4));
    CHECK(s.times[i] >= -50.0);
    CHECK(s.times[i] <= 50.0);
  }
  // m_max truncates
  CHECK(build_schedule({1.0, 0.4, -20.0, 20.0}, {5.0, 8.6, 0.0}, 1).orders == std::vector<int>{-1, 0, 1});
  CHECK(default_order_cutoff({1.0, 0.4, -20.0, 20.0}, {5.0, 8.6, 0.0}) == 5);
}

TEST_CASE("schedule errors") {
  CHECK_THROWS_AS(build_schedule({1.0, 0.2, -10.0, 10.0}, {1.0, 0.0, 0.0}, 3), ConfigError);
  CHECK_THROWS_AS(build_schedule({1.0, 0.2, -10.0, 10.0}, {1.0, 2.0, 0.0}, 0), ConfigError);
  CHECK_THROWS_AS(multijump_efficiency({1.0, 0.2, -10.0, 10.0}, {1.0, 0.0, 0.0}), ConfigError);
}

TEST_CASE("sideband couplings follow the bessel functions") {
  const double ratio = critical_ratio();
  const JumpSchedule s = build_schedule({1.0, 0.2, -10.0, 10.0}, {ratio * 4.0, 4.0, 0.0}, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.sideband_rabi[i] == doctest::Approx(std::cyl_bessel_j(std::abs(s.orders[i]), ratio) *
                                                ((s.orders[i] < 0 && s.orders[i] % 2) ? -1.0 : 1.0)));
    if (s.orders[i] == 0) CHECK(std::abs(s.sideband_rabi[i]) < 1e-12);
  }
}

TEST_CASE("crossing matrices") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  // zero coupling: no jump
  const JumpSchedule silent = build_schedule(sweep, {critical_ratio() * 3.0, 3.0, 0.0}, 3);
  const Matrix2 id = jump_unitary(0, silent, sweep);
  CHECK(std::abs(id.m00 - 1.0) < 1e-12);
  CHECK(std::abs(id.m11 - 1.0) < 1e-12);
  CHECK(std::abs(id.m01) < 1e-12);
  CHECK(std::abs(id.m10) < 1e-12);

  // bare resonance at full coupling: flip probability 1 - exp(-2.5 pi)
  const JumpSchedule bare = build_schedule(sweep, {0.0, 3.0, 0.0}, 3);
  const Matrix2 u = jump_unitary(0, bare, sweep);
  CHECK(std::norm(u.m10) == doctest::Approx(0.999611796796073234).epsilon(1e-14));
  CHECK(std::norm(u.m00) == doctest::Approx(3.88203203926766247e-4).epsilon(1e-12));
  CHECK_THROWS_AS(jump_unitary(7, bare, sweep), ConfigError);
}

TEST_CASE("crossing matrices are unitary") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const SweepConfig sweep{0.2 + 2.0 * u(rng), 0.01 + 5.0 * u(rng), -20.0, 20.0};
    const NoiseConfig noise{10.0 * u(rng), 0.5 + 10.0 * u(rng), kTwoPi * u(rng)};
    for (CrossingPhase c : {CrossingPhase::diabatic_limit, CrossingPhase::stokes}) {
      const JumpSchedule s = build_schedule(sweep, noise, 20, u(rng), c);
      for (int m : s.orders) CHECK(jump_unitary(m, s, sweep).unitarity_defect() < 1e-12);
      MultiJumpOptions opt;
      opt.crossing_phase = c;
      const MultiJumpEvolution ev = multijump_evolve(sweep, noise, opt);
      CHECK(ev.propagator.unitarity_defect() < 1e-10);
      CHECK(ev.final_state.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("free evolution composes") {
  const SweepConfig sweep{1.0, 0.37, -10.0, 10.0};
  const Matrix2 ab = free_evolution(-3.0, 5.5, sweep);
  const Matrix2 bc = free_evolution(5.5, 11.0, sweep);
  const Matrix2 ac = free_evolution(-3.0, 11.0, sweep);
  CHECK(std::abs((bc * ab).m11 - ac.m11) < 1e-12);
  CHECK(std::arg(free_evolution(0.0, 2.0, sweep).m11) == doctest::Approx(0.37 * 2.0));
}

TEST_CASE("stokes phase") {
  CHECK(stokes_phase(0.0) == doctest::Approx(kPi / 4));
  CHECK(stokes_phase(1e-9) == doctest::Approx(kPi / 4).epsilon(1e-7));
  // large kappa: arg Gamma(1 - i k) ~ -k ln k + k - pi/4 leading terms cancel
  CHECK(std::abs(stokes_phase(50.0)) < 0.01);
  const double k = 0.7;
  double series = 0.0;
  for (int n = 2'000'000; n >= 1; --n) series += k / n - std::atan(k / n);
  CHECK(stokes_phase(k) ==
        doctest::Approx(kPi / 4 + k * (std::log(k) - 1.0) + std::numbers::egamma * k - series).epsilon(1e-10));
}

TEST_CASE("no noise leaves only the bare landau-zener crossing") {
  for (double rate : {0.05, 0.2, 1.0, 10.0}) {
    const SweepConfig sweep{1.0, rate, -20.0, 20.0};
    const NoiseConfig noise{0.0, 3.0, 0.4};
    CHECK(multijump_evolve(sweep, noise).schedule.size() == 13);
    CHECK(multijump_efficiency(sweep, noise) == doctest::Approx(lz_transfer(1.0, rate)).epsilon(1e-12));
  }
}

TEST_CASE("three-order mode keeps the -1, 0, +1 resonances") {
  const SweepConfig sweep{1.0, 0.4, -20.0, 20.0};
  const NoiseConfig noise{5.0, 3.0, 0.0};
  MultiJumpOptions opt;
  opt.mode = MultiJumpMode::three_order;
  CHECK(multijump_evolve(sweep, noise, opt).schedule.orders == std::vector<int>{-1, 0, 1});
  CHECK(multijump_evolve(sweep, noise).schedule.size() == 13);
  CHECK(parse_multijump_mode("three_order") == MultiJumpMode::three_order);
  CHECK(parse_crossing_phase("stokes") == CrossingPhase::stokes);
  CHECK_THROWS_AS(parse_crossing_phase("nope"), ConfigError);
}

TEST_CASE("populations after each jump end at the final population") {
  const SweepConfig sweep{1.0, 0.4, -20.0, 20.0};
  const MultiJumpEvolution ev = multijump_evolve(sweep, {5.0, 8.6, 1.0});
  REQUIRE(ev.populations_after_jump.size() == ev.schedule.size());
  CHECK(ev.populations_after_jump.back() == doctest::Approx(ev.final_state.excited_population()));
}

TEST_CASE("in-phase resonances transfer more than out-of-phase ones") {
  const SweepConfig sweep{1.0, 0.4, -20.0, 20.0};
  const double in_phase = averaged(sweep, {5.0, std::sqrt(60.0 * kPi * 0.4), 0.0});
  const double out_of_phase = averaged(sweep, {5.0, std::sqrt(59.0 * kPi * 0.4), 0.0});
  CHECK(in_phase > 0.9);
  CHECK(out_of_phase < 0.5);
}

TEST_CASE("matrix helpers") {
  const Matrix2 a{{1.0, 2.0}, {0.5, -1.0}, {3.0, 0.0}, {0.0, 1.0}};
  const Matrix2 ad = a.adjoint();
  CHECK(ad.m01 == std::conj(a.m10));
  CHECK(ad.m10 == std::conj(a.m01));
  const Matrix2 p = a * Matrix2::identity();
  CHECK(p.m00 == a.m00);
  CHECK(p.m11 == a.m11);
  CHECK(Matrix2::identity().unitarity_defect() == 0.0);
  CHECK(a.unitarity_defect() > 1.0);
}
