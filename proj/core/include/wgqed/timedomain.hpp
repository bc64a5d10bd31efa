#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/model.hpp"
#include "wgqed/montecarlo.hpp"

namespace wgqed {

enum class PulseShape {
  lorentzian,  // E(t) = n sqrt(sigma) exp(-sigma |t - t0|)
  constant,    // E(t) = n for t >= t_start; zero-bandwidth surrogate
};

struct PulseConfig {
  double bandwidth = 0.01;       // sigma, rate units
  double mean_amplitude = 0.1;   // n
  double arrival = 0.0;          // t0
  std::optional<double> t_start; // default t0 - 10 / sigma
  std::optional<double> t_end;   // default t0
  double dt = 0.005;
  PulseShape shape = PulseShape::lorentzian;

  double start() const noexcept { return t_start.value_or(arrival - 10.0 / bandwidth); }
  double end() const noexcept { return t_end.value_or(arrival); }
  double envelope(double t) const noexcept;
};

// Largest admissible step: 0.01 / max(1, sigma, total decay).
double max_time_step(const ChainConfig& cfg, const PulseConfig& pulse) noexcept;
// Throws InvalidConfig for bad fields and StepTooLarge for an oversized dt.
void validate_pulse(const ChainConfig& cfg, const PulseConfig& pulse);

struct AmplitudeTrajectory {
  ChainConfig config;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> c1;  // single-excitation amplitudes per recorded time
  std::vector<Eigen::VectorXcd> c2;  // pair amplitudes per recorded time
  double max_abs_c1 = 0.0;
  bool weak_drive_ok = true;         // max |c1| < 10 n throughout

  std::size_t nearest(double t) const;
};

// Integrates dc1/dt = -i H1 c1 - i E(t) v_plus and dc2/dt = -i H2 c2 - i E(t) lift(c1)
// from zero amplitudes at pulse.start() to pulse.end() with classical RK4.
// Every `record_stride`-th step (and the final time) is stored.
AmplitudeTrajectory evolve(const ChainConfig& cfg, std::span<const double> detunings, const PulseConfig& pulse,
                           std::size_t record_stride = 1);

// Correlation at the recorded time nearest tau. Throws InvalidConfig if tau is
// outside the horizon or more than half a record interval from a stored time.
CorrelationValue g_at_time(const AmplitudeTrajectory& traj, double tau, Output out, const PulseConfig& pulse);
CorrelationValue g_from_amplitudes(const ChainConfig& cfg, const Eigen::VectorXcd& c1, const Eigen::VectorXcd& c2,
                                   double drive, Output out);

// Monte Carlo evaluator: g at the pulse end time for each disorder sample.
EvaluatorFactory make_timedomain_factory(const ChainConfig& cfg, const PulseConfig& pulse, Output out);

}  // namespace wgqed
