#include "wgqed/correlations.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void check_reflection(const ChainConfig& cfg) {
  if (cfg.gamma_r == 0.0) throw Error(ErrorCode::unsupported, "reflection output needs gamma_r > 0");
}

[[noreturn]] void singular(int sector, double ratio) {
  throw Error(ErrorCode::singular_sector,
              "sector " + std::to_string(sector) + " matrix is numerically singular (pivot ratio " +
                  std::to_string(ratio) + ")");
}

CorrelationValue from_ratio(cd numerator, cd denominator) {
  const double den = std::abs(denominator);
  if (den < divergence_threshold) return CorrelationValue::divergent();
  const double den2 = den * den;
  return CorrelationValue::finite(std::norm(numerator) / (den2 * den2));
}

}  // namespace

TruncatedSteadyState solve_steady_state(const SectorOneMatrix& h1, const SectorTwoMatrix& h2,
                                        const DriveVectors& drive) {
  const auto n = h1.rows();
  if (h1.cols() != n || drive.v_plus.size() != n)
    throw Error(ErrorCode::dimension_mismatch, "sector-1 matrix and drive disagree in size");
  if (static_cast<std::size_t>(h2.dim()) != pair_count(static_cast<int>(n)))
    throw Error(ErrorCode::dimension_mismatch, "sector-2 matrix has wrong dimension");

  TruncatedSteadyState out;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu1(h1);
  // rcond() is an estimate of 1 / cond_1.
  if (!(lu1.rcond() * singular_pivot_ratio > 1.0)) singular(1, 1.0 / lu1.rcond());
  out.psi1 = -lu1.solve(drive.v_plus);

  if (h2.dim() == 0) {
    out.psi2.resize(0);
    return out;
  }
  const Eigen::VectorXcd rhs = -drive.lift(out.psi1);
  if (h2.is_dense()) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu2(h2.dense());
    if (!(lu2.rcond() * singular_pivot_ratio > 1.0)) singular(2, 1.0 / lu2.rcond());
    out.psi2 = lu2.solve(rhs);
  } else if (h2.triangularity() != Triangularity::none) {
    out.psi2 = rhs;
    triangular_solve(h2, h2.triangularity() == Triangularity::lower,
                     std::span<cd>(out.psi2.data(), static_cast<std::size_t>(out.psi2.size())));
  } else {
    Eigen::SparseMatrix<cd> a = h2.to_sparse();
    Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu2;
    lu2.compute(a);
    if (lu2.info() != Eigen::Success) singular(2, INFINITY);
    out.psi2 = lu2.solve(rhs);
  }
  return out;
}

TruncatedSteadyState steady_state(const ChainConfig& cfg, std::span<const double> detunings) {
  const auto h1 = build_sector1(cfg, detunings);
  const auto h2 = cfg.n_qubits >= 2 ? build_sector2(cfg, detunings) : SectorTwoMatrix();
  return solve_steady_state(h1, h2, build_drive(cfg));
}

OutputAmplitudes output_amplitudes(const ProjectionVectors& proj, const TruncatedSteadyState& state, Output out) {
  const bool t = out == Output::transmission;
  // Eigen's dot() conjugates its left operand: <phi|psi>.
  OutputAmplitudes a;
  a.single = (t ? proj.phi1_plus : proj.phi1_minus).dot(state.psi1);
  a.pair = state.psi2.size() > 0 ? (t ? proj.phi2_plus : proj.phi2_minus).dot(state.psi2) : cd{};
  return a;
}

CorrelationValue correlation_from_amplitudes(const OutputAmplitudes& a, Output out) {
  if (out == Output::transmission) return from_ratio(1.0 - 2.0 * kI * a.single - a.pair, 1.0 - kI * a.single);
  return from_ratio(a.pair, a.single);
}

CorrelationValue correlation_from_state(const ChainConfig& cfg, const TruncatedSteadyState& state, Output out) {
  if (out == Output::reflection) check_reflection(cfg);
  return correlation_from_amplitudes(output_amplitudes(build_projections(cfg), state, out), out);
}

CorrelationValue g_correlation(const ChainConfig& cfg, std::span<const double> detunings, Output out) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  CorrelationEvaluator eval(cfg);
  return eval.evaluate(detunings, out);
}

CorrelationValue g_transmission(const ChainConfig& cfg, std::span<const double> detunings) {
  return g_correlation(cfg, detunings, Output::transmission);
}

CorrelationValue g_reflection(const ChainConfig& cfg, std::span<const double> detunings) {
  return g_correlation(cfg, detunings, Output::reflection);
}

CorrelationValue g_clean(const ChainConfig& cfg, Output out) {
  validate_config(cfg);
  return g_correlation(cfg, DisorderSample::zeros(cfg.n_qubits).view(), out);
}

TruncatedSteadyState noninteracting_state(const ChainConfig& cfg, std::span<const double> detunings) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  const int n = cfg.n_qubits;
  const double s = std::sqrt(cfg.gamma_t);
  const double half = 0.5 * cfg.total_decay();
  TruncatedSteadyState out;
  out.psi1.resize(n);
  for (int m = 1; m <= n; ++m)
    out.psi1[m - 1] = -s * std::polar(1.0, m * cfg.phase) / cd(detunings[m - 1], -half);
  out.psi2.resize(static_cast<Eigen::Index>(pair_count(n)));
  for (int m = 2; m <= n; ++m)
    for (int k = 1; k < m; ++k)
      out.psi2[static_cast<Eigen::Index>(pair_flat(m, k))] = out.psi1[m - 1] * out.psi1[k - 1];
  return out;
}

CorrelationValue g_noninteracting(const ChainConfig& cfg, std::span<const double> detunings, Output out) {
  validate_config(cfg);
  check_sample(cfg, detunings);
  return NonInteractingEvaluator(cfg).evaluate(detunings, out);
}

// ---------------------------------------------------------------------------

struct CorrelationEvaluator::SparseSolver {
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
};

CorrelationEvaluator::CorrelationEvaluator(const ChainConfig& cfg, int dense_limit)
    : cfg_(cfg), n_(cfg.n_qubits), pairs_(pair_count(cfg.n_qubits)), dense_(cfg.n_qubits <= dense_limit) {
  validate_config(cfg);
  hop_ = hopping_matrix(cfg);
  drive_ = build_drive(cfg);
  const auto proj = build_projections(cfg);
  c1_t_ = proj.phi1_plus.conjugate();
  c1_r_ = proj.phi1_minus.conjugate();
  c2_t_ = proj.phi2_plus.conjugate();
  c2_r_ = proj.phi2_minus.conjugate();

  for (int m = 1; m < n_; ++m)
    for (int k = 0; k < m; ++k) pair_sites_.emplace_back(m, k);

  if (dense_ && n_ >= 2) {
    const std::vector<double> zeros(static_cast<std::size_t>(n_), 0.0);
    const auto h2 = build_sector2(cfg, zeros);
    h2_template_.assign(pairs_ * pairs_, cd{});
    for (std::size_t r = 0; r < pairs_; ++r)
      for (const auto& e : h2.row(r))
        if (e.col != r) h2_template_[r + e.col * pairs_] = e.value;
  }
  if (!dense_) sparse_ = std::make_unique<SparseSolver>();
  state_.psi1.resize(n_);
  state_.psi2.resize(static_cast<Eigen::Index>(pairs_));
}

CorrelationEvaluator::~CorrelationEvaluator() = default;
CorrelationEvaluator::CorrelationEvaluator(CorrelationEvaluator&&) noexcept = default;
CorrelationEvaluator& CorrelationEvaluator::operator=(CorrelationEvaluator&&) noexcept = default;

void CorrelationEvaluator::check_output(Output out) const {
  if (out == Output::reflection) check_reflection(cfg_);
}

void CorrelationEvaluator::solve(std::span<const double> detunings) {
  check_sample(cfg_, detunings);
  if (dense_)
    solve_dense(detunings);
  else
    solve_sparse(detunings);
}

void CorrelationEvaluator::solve_dense(std::span<const double> detunings) {
  const double half = 0.5 * cfg_.total_decay();
  const auto n = static_cast<std::size_t>(n_);

  lu1_.resize(n);
  auto a1 = lu1_.storage();
  std::copy(hop_.data(), hop_.data() + n * n, a1.begin());
  for (std::size_t m = 0; m < n; ++m) a1[m + m * n] = cd(detunings[m], -half);
  if (!lu1_.factor_in_place() || lu1_.pivot_ratio() > singular_pivot_ratio) singular(1, lu1_.pivot_ratio());
  cd* psi1 = state_.psi1.data();
  for (std::size_t m = 0; m < n; ++m) psi1[m] = -drive_.v_plus[static_cast<Eigen::Index>(m)];
  lu1_.solve({psi1, n});

  if (pairs_ == 0) return;
  const std::size_t np = pairs_;
  lu2_.resize(np);
  auto a2 = lu2_.storage();
  std::copy(h2_template_.begin(), h2_template_.end(), a2.begin());
  const double gamma = cfg_.total_decay();
  cd* psi2 = state_.psi2.data();
  const cd* ph = drive_.site_phase.data();
  const double s = drive_.sqrt_gamma_t;
  for (std::size_t k = 0; k < np; ++k) {
    const auto [m, j] = pair_sites_[k];
    a2[k + k * np] = cd(detunings[m] + detunings[j], -gamma);
    psi2[k] = -s * (ph[m] * psi1[j] + ph[j] * psi1[m]);
  }
  if (!lu2_.factor_in_place() || lu2_.pivot_ratio() > singular_pivot_ratio) singular(2, lu2_.pivot_ratio());
  lu2_.solve({psi2, np});
}

void CorrelationEvaluator::solve_sparse(std::span<const double> detunings) {
  const auto h1 = build_sector1(cfg_, detunings);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu1(h1);
  if (!(lu1.rcond() * singular_pivot_ratio > 1.0)) singular(1, 1.0 / lu1.rcond());
  state_.psi1 = -lu1.solve(drive_.v_plus);
  if (pairs_ == 0) return;

  const auto h2 = build_sector2(cfg_, detunings, 0);
  state_.psi2 = -drive_.lift(state_.psi1);
  if (h2.triangularity() != Triangularity::none) {
    triangular_solve(h2, h2.triangularity() == Triangularity::lower,
                     std::span<cd>(state_.psi2.data(), pairs_));
    return;
  }
  sparse_->lu.compute(Eigen::SparseMatrix<cd>(h2.to_sparse()));
  if (sparse_->lu.info() != Eigen::Success) singular(2, INFINITY);
  state_.psi2 = sparse_->lu.solve(Eigen::VectorXcd(state_.psi2));
}

OutputAmplitudes CorrelationEvaluator::amplitudes(Output out) const {
  const bool t = out == Output::transmission;
  OutputAmplitudes a;
  a.single = (t ? c1_t_ : c1_r_).cwiseProduct(state_.psi1).sum();
  a.pair = pairs_ ? (t ? c2_t_ : c2_r_).cwiseProduct(state_.psi2).sum() : cd{};
  return a;
}

CorrelationValue CorrelationEvaluator::correlation(Output out) const {
  check_output(out);
  return correlation_from_amplitudes(amplitudes(out), out);
}

CorrelationEvaluator::LogGradient CorrelationEvaluator::log_g_gradient(std::span<const double> detunings,
                                                                       Output out) {
  if (!dense_) throw Error(ErrorCode::unsupported, "gradient is only available on the dense path");
  check_output(out);
  solve(detunings);
  const bool t = out == Output::transmission;
  const auto amp = amplitudes(out);
  const cd num = t ? 1.0 - 2.0 * kI * amp.single - amp.pair : amp.pair;
  const cd den = t ? 1.0 - kI * amp.single : amp.single;

  LogGradient res;
  res.gradient.assign(static_cast<std::size_t>(n_), 0.0);
  if (std::abs(den) < divergence_threshold) {
    res.divergent = true;
    res.log_g = INFINITY;
    return res;
  }
  res.log_g = std::log(std::norm(num)) - 2.0 * std::log(std::norm(den));

  const auto n = static_cast<std::size_t>(n_);
  const Eigen::VectorXcd& c1 = t ? c1_t_ : c1_r_;
  const Eigen::VectorXcd& c2 = t ? c2_t_ : c2_r_;
  const cd* psi1 = state_.psi1.data();
  const cd* psi2 = state_.psi2.data();

  // Adjoint vectors: lambda1 = H1^-T c1, lambda2 = H2^-T c2, nu = H1^-T lift^T lambda2.
  std::vector<cd> lambda1(c1.data(), c1.data() + n);
  lu1_.solve_transposed(lambda1);
  std::vector<cd> lambda2(c2.data(), c2.data() + pairs_);
  std::vector<cd> nu(n, cd{});
  if (pairs_) {
    lu2_.solve_transposed(lambda2);
    const cd* ph = drive_.site_phase.data();
    for (std::size_t k = 0; k < pairs_; ++k) {
      const auto [m, j] = pair_sites_[k];
      nu[static_cast<std::size_t>(j)] += drive_.sqrt_gamma_t * ph[m] * lambda2[k];
      nu[static_cast<std::size_t>(m)] += drive_.sqrt_gamma_t * ph[j] * lambda2[k];
    }
    lu1_.solve_transposed(nu);
  }

  std::vector<cd> pair_term(n, cd{});
  for (std::size_t k = 0; k < pairs_; ++k) {
    const auto [m, j] = pair_sites_[k];
    const cd v = lambda2[k] * psi2[k];
    pair_term[static_cast<std::size_t>(m)] += v;
    pair_term[static_cast<std::size_t>(j)] += v;
  }

  for (std::size_t k = 0; k < n; ++k) {
    const cd da1 = -psi1[k] * lambda1[k];
    const cd da2 = pairs_ ? -pair_term[k] + psi1[k] * nu[k] : cd{};
    const cd dnum = t ? -2.0 * kI * da1 - da2 : da2;
    const cd dden = t ? -kI * da1 : da1;
    const double dnum_term = num == cd{} ? 0.0 : 2.0 * std::real(dnum / num);
    res.gradient[k] = dnum_term - 4.0 * std::real(dden / den);
  }
  return res;
}

// ---------------------------------------------------------------------------

NonInteractingEvaluator::NonInteractingEvaluator(const ChainConfig& cfg) : cfg_(cfg) {
  validate_config(cfg);
  double_phase_.resize(static_cast<std::size_t>(cfg.n_qubits));
  for (int m = 1; m <= cfg.n_qubits; ++m) double_phase_[m - 1] = std::polar(1.0, 2.0 * m * cfg.phase);
}

CorrelationValue NonInteractingEvaluator::evaluate(std::span<const double> detunings, Output out) const {
  const double half = 0.5 * cfg_.total_decay();
  const double gt = cfg_.gamma_t;
  const std::size_t n = detunings.size();
  // Sum over m > n of x_m x_n equals (S^2 - sum x^2) / 2.
  cd sum{}, sum_sq{};
  if (out == Output::transmission) {
    for (std::size_t m = 0; m < n; ++m) {
      const cd x = 1.0 / cd(detunings[m], -half);
      sum += x;
      sum_sq += x * x;
    }
    const cd pairs = 0.5 * (sum * sum - sum_sq);
    return from_ratio(1.0 + 2.0 * kI * gt * sum - 2.0 * gt * gt * pairs, 1.0 + kI * gt * sum);
  }
  check_reflection(cfg_);
  for (std::size_t m = 0; m < n; ++m) {
    const cd x = double_phase_[m] / cd(detunings[m], -half);
    sum += x;
    sum_sq += x * x;
  }
  const cd pairs = 0.5 * (sum * sum - sum_sq);
  return from_ratio(2.0 * gt * gt * pairs, -gt * sum);
}

}  // namespace wgqed
