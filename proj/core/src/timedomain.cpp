#include "wgqed/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "wgqed/correlations.hpp"
#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Right-hand side of the amplitude equations with the chain matrices baked in.
class AmplitudeSystem {
 public:
  AmplitudeSystem(const ChainConfig& cfg, std::span<const double> detunings)
      : n_(static_cast<std::size_t>(cfg.n_qubits)), drive_(build_drive(cfg)) {
    const auto h1 = build_sector1(cfg, detunings);
    h1_.resize(n_ * n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c)
        h1_[r * n_ + c] = -kI * h1(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    if (n_ >= 2) h2_ = build_sector2(cfg, detunings, 0);
    for (int m = 1; m < cfg.n_qubits; ++m)
      for (int k = 0; k < m; ++k) pairs_.emplace_back(m, k);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t pairs() const noexcept { return pairs_.size(); }

  // d(c1, c2)/dt at drive value e, written into (d1, d2).
  void rhs(double e, const cd* c1, const cd* c2, cd* d1, cd* d2) const {
    const cd* v = drive_.v_plus.data();
    for (std::size_t r = 0; r < n_; ++r) {
      cd acc = -kI * e * v[r];
      const cd* row = h1_.data() + r * n_;
      for (std::size_t c = 0; c < n_; ++c) acc += row[c] * c1[c];
      d1[r] = acc;
    }
    const cd* ph = drive_.site_phase.data();
    const double s = drive_.sqrt_gamma_t;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const auto [m, j] = pairs_[k];
      cd acc = -kI * e * s * (ph[m] * c1[j] + ph[j] * c1[m]);
      cd hc{};
      for (const auto& en : h2_.row(k)) hc += en.value * c2[en.col];
      d2[k] = acc - kI * hc;
    }
  }

 private:
  std::size_t n_;
  DriveVectors drive_;
  std::vector<cd> h1_;  // -i H1, row-major
  SectorTwoMatrix h2_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace

double PulseConfig::envelope(double t) const noexcept {
  if (shape == PulseShape::constant) return t >= start() ? mean_amplitude : 0.0;
  return mean_amplitude * std::sqrt(bandwidth) * std::exp(-bandwidth * std::abs(t - arrival));
}

double max_time_step(const ChainConfig& cfg, const PulseConfig& pulse) noexcept {
  const double sigma = pulse.shape == PulseShape::lorentzian ? pulse.bandwidth : 0.0;
  return 0.01 / std::max({1.0, sigma, cfg.total_decay()});
}

void validate_pulse(const ChainConfig& cfg, const PulseConfig& pulse) {
  validate_config(cfg);
  if (pulse.shape == PulseShape::lorentzian && !(pulse.bandwidth > 0.0))
    throw Error(ErrorCode::invalid_config, "bandwidth must be > 0");
  // Zero amplitude is allowed as the undriven control run.
  if (!(pulse.mean_amplitude >= 0.0)) throw Error(ErrorCode::invalid_config, "mean_amplitude must be >= 0");
  if (!(pulse.dt > 0.0)) throw Error(ErrorCode::invalid_config, "dt must be > 0");
  if (!(pulse.end() >= pulse.start())) throw Error(ErrorCode::invalid_config, "time horizon is empty");
  if (pulse.dt > max_time_step(cfg, pulse) * (1.0 + 1e-12))
    throw Error(ErrorCode::step_too_large,
                "dt " + std::to_string(pulse.dt) + " exceeds " + std::to_string(max_time_step(cfg, pulse)));
}

std::size_t AmplitudeTrajectory::nearest(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  if (it == times.begin()) return 0;
  return (t - *(it - 1) <= *it - t) ? static_cast<std::size_t>(it - times.begin() - 1)
                                    : static_cast<std::size_t>(it - times.begin());
}

AmplitudeTrajectory evolve(const ChainConfig& cfg, std::span<const double> detunings, const PulseConfig& pulse,
                           std::size_t record_stride) {
  validate_pulse(cfg, pulse);
  check_sample(cfg, detunings);
  record_stride = std::max<std::size_t>(record_stride, 1);
  const AmplitudeSystem sys(cfg, detunings);
  const std::size_t n = sys.n(), np = sys.pairs();

  const double t0 = pulse.start();
  const double t1 = pulse.end();
  const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / pulse.dt - 1e-9));
  const double h = steps > 0 ? (t1 - t0) / static_cast<double>(steps) : 0.0;

  std::vector<cd> y(n + np, cd{}), k1(n + np), k2(n + np), k3(n + np), k4(n + np), tmp(n + np);
  auto f = [&](double t, const std::vector<cd>& in, std::vector<cd>& out) {
    sys.rhs(pulse.envelope(t), in.data(), in.data() + n, out.data(), out.data() + n);
  };

  AmplitudeTrajectory traj;
  traj.config = cfg;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.c1.emplace_back(Eigen::Map<const Eigen::VectorXcd>(y.data(), static_cast<Eigen::Index>(n)));
    traj.c2.emplace_back(Eigen::Map<const Eigen::VectorXcd>(y.data() + n, static_cast<Eigen::Index>(np)));
  };
  record(t0);

  const std::size_t len = n + np;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    f(t, y, k1);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < len; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (std::size_t i = 0; i < n; ++i) traj.max_abs_c1 = std::max(traj.max_abs_c1, std::abs(y[i]));
    if ((s + 1) % record_stride == 0 || s + 1 == steps) record(s + 1 == steps ? t1 : t + h);
  }
  traj.weak_drive_ok = traj.max_abs_c1 < 10.0 * pulse.mean_amplitude;
  return traj;
}

CorrelationValue g_from_amplitudes(const ChainConfig& cfg, const Eigen::VectorXcd& c1, const Eigen::VectorXcd& c2,
                                   double e, Output out) {
  const int n = cfg.n_qubits;
  const double sign = out == Output::transmission ? -1.0 : 1.0;
  const double rate = out == Output::transmission ? cfg.gamma_t : cfg.gamma_r;
  if (out == Output::reflection && rate == 0.0)
    throw Error(ErrorCode::unsupported, "reflection output needs gamma_r > 0");
  const double s = std::sqrt(rate);
  cd single{}, pair{};
  for (int m = 1; m <= n; ++m) single += std::polar(1.0, sign * m * cfg.phase) * c1[m - 1];
  for (int m = 2; m <= n; ++m)
    for (int k = 1; k < m; ++k)
      pair += std::polar(1.0, sign * (m + k) * cfg.phase) * c2[static_cast<Eigen::Index>(pair_flat(m, k))];

  cd a1, a2;
  if (out == Output::transmission) {
    a1 = e - kI * s * single;
    a2 = e * e - 2.0 * kI * e * s * single - 2.0 * rate * pair;
  } else {
    a1 = -kI * s * single;
    a2 = -2.0 * rate * pair;
  }
  const double den = std::abs(a1);
  // Amplitudes scale with the drive; compare against the drive scale squared.
  const double scale = std::max(std::abs(e), 1e-300);
  if (den < divergence_threshold * scale) return CorrelationValue::divergent();
  const double d2 = den * den;
  return CorrelationValue::finite(std::norm(a2) / (d2 * d2));
}

CorrelationValue g_at_time(const AmplitudeTrajectory& traj, double tau, Output out, const PulseConfig& pulse) {
  if (traj.times.empty()) throw Error(ErrorCode::invalid_config, "empty trajectory");
  const double lo = traj.times.front(), hi = traj.times.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
  if (tau < lo - slack || tau > hi + slack) throw Error(ErrorCode::invalid_config, "tau outside the integration horizon");
  const std::size_t i = traj.nearest(tau);
  const double spacing = traj.times.size() > 1 ? (hi - lo) / static_cast<double>(traj.times.size() - 1) : 0.0;
  if (std::abs(traj.times[i] - tau) > 0.5 * spacing + slack)
    throw Error(ErrorCode::invalid_config, "tau is not on the recorded time grid");
  return g_from_amplitudes(traj.config, traj.c1[i], traj.c2[i], pulse.envelope(traj.times[i]), out);
}

EvaluatorFactory make_timedomain_factory(const ChainConfig& cfg, const PulseConfig& pulse, Output out) {
  validate_pulse(cfg, pulse);
  return [cfg, pulse, out]() -> SampleEvaluator {
    return [cfg, pulse, out](std::span<const double> d) {
      const auto traj = evolve(cfg, d, pulse, std::numeric_limits<std::size_t>::max());
      return g_from_amplitudes(cfg, traj.c1.back(), traj.c2.back(), pulse.envelope(traj.times.back()), out);
    };
  };
}

}  // namespace wgqed
