#include <doctest.h>

#include <numbers>
#include <random>

#include "wgqed/correlations.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/timedomain.hpp"

using namespace wgqed;

namespace {

constexpr double kPi = std::numbers::pi;

PulseConfig constant_drive(double amplitude, double duration, double dt = 0.01) {
  PulseConfig p;
  p.shape = PulseShape::constant;
  p.mean_amplitude = amplitude;
  p.t_start = 0.0;
  p.t_end = duration;
  p.dt = dt;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("pulse validation") {
  const auto cfg = ChainConfig::symmetric(2, 0.1);
  PulseConfig p;
  CHECK_NOTHROW(validate_pulse(cfg, p));
  CHECK(p.start() == doctest::Approx(-1000.0));
  CHECK(p.end() == 0.0);
  p.dt = 0.02;
  try {
    validate_pulse(cfg, p);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::step_too_large);
  }
  CHECK(max_time_step(ChainConfig{2, 0.1, 2.0, 2.0, 1.0}, PulseConfig{}) == doctest::Approx(0.002));
  p = PulseConfig{};
  p.bandwidth = 0.0;
  CHECK_THROWS_AS(validate_pulse(cfg, p), Error);
}

TEST_CASE("lorentzian envelope") {
  PulseConfig p;
  p.bandwidth = 0.04;
  p.mean_amplitude = 0.1;
  p.arrival = 5.0;
  CHECK(p.envelope(5.0) == doctest::Approx(0.1 * 0.2));
  CHECK(p.envelope(5.0 + 25.0) == doctest::Approx(0.1 * 0.2 * std::exp(-1.0)));
  CHECK(p.envelope(5.0 - 25.0) == p.envelope(5.0 + 25.0));
}

TEST_CASE("undriven chain stays empty") {
  const auto traj = evolve(ChainConfig::symmetric(3, 0.4), std::vector<double>{0.1, 0.2, -0.3}, constant_drive(0.0, 5.0));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(traj.c1[i].norm() == 0.0);
    CHECK(traj.c2[i].norm() == 0.0);
  }
}

TEST_CASE("constant drive relaxes to the steady state") {
  const ChainConfig cfg{3, 0.3 * kPi, 0.6, 0.4, 0.2};
  const std::vector<double> d{0.4, -0.7, 0.2};
  const double alpha = 0.05;
  const auto pulse = constant_drive(alpha, 80.0, max_time_step(cfg, PulseConfig{}));
  const auto traj = evolve(cfg, d, pulse, 100);
  const auto ss = steady_state(cfg, d);
  const auto i = traj.nearest(80.0);
  CHECK((traj.c1[i] - alpha * ss.psi1).norm() <= 1e-6 * alpha * ss.psi1.norm());
  CHECK((traj.c2[i] - alpha * alpha * ss.psi2).norm() <= 1e-6 * alpha * alpha * ss.psi2.norm());
  for (Output out : {Output::transmission, Output::reflection})
    CHECK(rel(g_at_time(traj, 80.0, out, pulse).value(), g_correlation(cfg, d, out).value()) <= 1e-6);
  CHECK(traj.weak_drive_ok);
}

TEST_CASE("constant drive surrogate matches steady state at random points") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const ChainConfig cfg{n, 2 * kPi * u(rng), 0.3 + u(rng), 0.3 + u(rng), u(rng)};
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& x : d) x = g(rng);
    // Skip samples with long-lived dark modes; they need longer horizons.
    const auto ev = build_sector1(cfg, d).eigenvalues();
    if ((-ev.imag()).minCoeff() < 0.4) continue;
    const auto pulse = constant_drive(0.1, 80.0, max_time_step(cfg, PulseConfig{}));
    const auto traj = evolve(cfg, d, pulse, std::numeric_limits<std::size_t>::max());
    for (Output out : {Output::transmission, Output::reflection}) {
      if (n == 1 && out == Output::reflection) continue;
      CHECK(rel(g_at_time(traj, 80.0, out, pulse).value(), g_correlation(cfg, d, out).value()) <= 1e-6);
    }
    ++checked;
  }
  CHECK(checked >= 8);
}

TEST_CASE("fourth-order convergence") {
  const auto cfg = ChainConfig::symmetric(2, 0.3);
  // Large detunings make the truncation error visible at the admissible steps.
  const std::vector<double> d{20.0, -15.0};
  PulseConfig p;
  p.bandwidth = 0.5;
  p.t_start = -10.0;
  auto final_state = [&](double dt) {
    auto q = p;
    q.dt = dt;
    const auto t = evolve(cfg, d, q, std::numeric_limits<std::size_t>::max());
    Eigen::VectorXcd all(t.c1.back().size() + t.c2.back().size());
    all << t.c1.back(), t.c2.back();
    return all;
  };
  const auto ref = final_state(0.01 / 4);
  const double e1 = (final_state(0.01) - ref).norm();
  const double e2 = (final_state(0.005) - ref).norm();
  CHECK(e2 > 1e-11);
  INFO("errors ", e1, " ", e2);
  // Expected ratio against a dt/4 reference: (1 - 4^-4) / (2^-4 - 4^-4) = 17.
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("narrow band single qubit on resonance is strongly bunched") {
  PulseConfig p;
  const auto traj = evolve(ChainConfig::symmetric(1, 0.0), std::vector<double>{0.0}, p, 1000);
  CHECK(g_at_time(traj, p.arrival, Output::transmission, p).value() > 100.0);
}

TEST_CASE("weak-drive invariance") {
  const auto cfg = ChainConfig::symmetric(3, 0.5 * kPi);
  const std::vector<double> d{0.2, -0.1, 0.6};
  PulseConfig a;
  a.bandwidth = 0.1;
  PulseConfig b = a;
  b.mean_amplitude = a.mean_amplitude / 2;
  const auto ta = evolve(cfg, d, a, 1000), tb = evolve(cfg, d, b, 1000);
  for (Output out : {Output::transmission, Output::reflection})
    CHECK(rel(g_at_time(tb, 0.0, out, b).value(), g_at_time(ta, 0.0, out, a).value()) < 1e-2);
  CHECK(ta.weak_drive_ok);
}

TEST_CASE("rising edge equals the steady state of the shifted Hamiltonian") {
  // For t <= t0 the drive grows as exp(sigma t), so c1 = E x and c2 = E^2 y
  // solve the steady-state equations with every decay rate raised by 2 sigma.
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PulseConfig p;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const auto cfg = ChainConfig::symmetric(n, 2 * kPi * u(rng));
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& x : d) x = g(rng);
    auto shifted = cfg;
    shifted.gamma_nw += 2.0 * p.bandwidth;
    const auto traj = evolve(cfg, d, p, std::numeric_limits<std::size_t>::max());
    for (Output out : {Output::transmission, Output::reflection}) {
      if (n == 1 && out == Output::reflection) continue;
      const auto ref = g_correlation(shifted, d, out);
      if (!ref.is_finite()) continue;
      CHECK(rel(g_at_time(traj, p.arrival, out, p).value(), ref.value()) <= 1e-6);
    }
  }
}

TEST_CASE("narrow band recovers the zero-bandwidth correlation" * doctest::test_suite("zero_bandwidth")) {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PulseConfig p;  // bandwidth 0.01, tau = t0
  int checked = 0, close = 0;
  for (int trial = 0; checked < 100 && trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    const auto cfg = ChainConfig::symmetric(n, 2 * kPi * u(rng));
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& x : d) x = g(rng);
    const Output out = (n > 1 && trial % 2) ? Output::reflection : Output::transmission;
    const auto ref = g_correlation(cfg, d, out);
    if (!ref.is_finite() || ref.value() < 1e-3 || ref.value() > 1e3) continue;
    const auto traj = evolve(cfg, d, p, std::numeric_limits<std::size_t>::max());
    const double gt = g_at_time(traj, p.arrival, out, p).value();
    ++checked;
    close += rel(gt, ref.value()) <= 0.05;
  }
  CHECK(checked == 100);
  INFO("instances within 5%: ", close, " of ", checked);
  CHECK(close == checked);
}

TEST_CASE("tau must lie on the recorded grid") {
  PulseConfig p;
  p.bandwidth = 1.0;
  const auto traj = evolve(ChainConfig::symmetric(2, 0.2), std::vector<double>{0.1, 0.2}, p, 10);
  CHECK_THROWS_AS((void)g_at_time(traj, 5.0, Output::transmission, p), Error);
  CHECK_NOTHROW((void)g_at_time(traj, 0.0, Output::transmission, p));
}
