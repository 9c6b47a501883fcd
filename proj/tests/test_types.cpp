#include <doctest.h>

#include <cmath>
#include <random>

#include "arpsim/types.hpp"

using namespace arpsim;

TEST_CASE("detuning at the resonance instant") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  CHECK(detuning(0.0, sweep, NoiseConfig{}) == 0.0);
  CHECK(detuning(0.0, sweep, NoiseConfig{1.0, 2.0, kPi / 2}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("detuning with noise") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  // 1 - cos(10), high-precision reference
  CHECK(detuning(5.0, sweep, NoiseConfig{1.0, 2.0, 0.0}) ==
        doctest::Approx(1.83907152907645245).epsilon(1e-14));
}

TEST_CASE("detuning is exactly linear without noise") {
  const SweepConfig sweep{1.0, 0.37, -10.0, 10.0};
  for (double t : {-27.0, -3.5, 0.25, 11.0, 27.0}) CHECK(detuning(t, sweep, NoiseConfig{}) == 0.37 * t);
}

TEST_CASE("noise term is periodic in time") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const SweepConfig sweep{1.0, 0.01 + u(rng), -10.0, 10.0};
    const NoiseConfig noise{3.0 * u(rng), 0.1 + 20.0 * u(rng), kTwoPi * u(rng)};
    const double t = -40.0 + 80.0 * u(rng);
    const double period = kTwoPi / noise.frequency;
    const double shifted = detuning(t + period, sweep, noise) - sweep.sweep_rate * period;
    CHECK(detuning(t, sweep, noise) == doctest::Approx(shifted).epsilon(1e-9).scale(10.0));
  }
}

TEST_CASE("sweep window") {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  CHECK(sweep.start_time() == -50.0);
  CHECK(sweep.end_time() == 50.0);
  CHECK(sweep.duration() == 100.0);
  CHECK_NOTHROW(sweep.validate());

  CHECK_THROWS_AS((SweepConfig{0.0, 0.2, -10.0, 10.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SweepConfig{1.0, 0.0, -10.0, 10.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SweepConfig{1.0, -0.2, -10.0, 10.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SweepConfig{1.0, 0.2, 10.0, 10.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SweepConfig{1.0, 0.2, 10.0, -10.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SweepConfig{1.0, 1e-320, -10.0, 10.0}.validate()), ConfigError);
}

TEST_CASE("noise config invariants") {
  CHECK_NOTHROW((NoiseConfig{0.0, 0.0, 0.0}.validate()));
  CHECK_THROWS_AS((NoiseConfig{-1.0, 1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((NoiseConfig{1.0, -1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((NoiseConfig{1.0, 1.0, NAN}.validate()), ConfigError);
}

TEST_CASE("phase normalization") {
  CHECK(normalize_phase(0.0) == 0.0);
  CHECK(normalize_phase(kTwoPi) == 0.0);
  CHECK(normalize_phase(-kPi / 2) == doctest::Approx(1.5 * kPi));
  CHECK(normalize_phase(-1e-300) >= 0.0);
  CHECK(normalize_phase(-1e-300) < kTwoPi);
  CHECK(normalize_phase(-1e-3) == doctest::Approx(kTwoPi - 1e-3));
  CHECK(normalize_phase(7.0 * kPi) == doctest::Approx(kPi));
  const NoiseConfig n = NoiseConfig{1.0, 2.0, -0.5}.normalized();
  CHECK(n.phase >= 0.0);
  CHECK(n.phase < kTwoPi);
}

TEST_CASE("bloch vector of basis and superposition states") {
  BlochVector g = bloch_from_state({{1.0, 0.0}, {0.0, 0.0}});
  CHECK(g.u == 0.0);
  CHECK(g.v == 0.0);
  CHECK(g.w == -1.0);

  BlochVector e = bloch_from_state({{0.0, 0.0}, {1.0, 0.0}});
  CHECK(e.w == 1.0);

  const double r = 1.0 / std::sqrt(2.0);
  BlochVector x = bloch_from_state({{r, 0.0}, {r, 0.0}});
  CHECK(x.u == doctest::Approx(1.0));
  CHECK(x.v == doctest::Approx(0.0));
  CHECK(x.w == doctest::Approx(0.0));
}

TEST_CASE("bloch vector rejects unnormalized states") {
  CHECK_THROWS_AS(bloch_from_state({{1.0, 0.0}, {0.1, 0.0}}), ConfigError);
  CHECK_NOTHROW(bloch_from_state({{1.0 + 1e-7, 0.0}, {0.0, 0.0}}));
}

TEST_CASE("bloch vector of random pure states has unit length") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Complex a{n(rng), n(rng)}, b{n(rng), n(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    const StateVector s{a / norm, b / norm};
    const BlochVector bv = bloch_from_state(s);
    CHECK(bv.length() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bv.w == doctest::Approx(s.excited_population() - std::norm(s.ground)));
  }
}
