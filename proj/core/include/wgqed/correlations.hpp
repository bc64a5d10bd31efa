#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/linalg.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

// Amplitude magnitude below which a correlation is reported as divergent.
inline constexpr double divergence_threshold = 1e-14;
// Pivot ratio above which a sector matrix is treated as singular.
inline constexpr double singular_pivot_ratio = 1e14;

struct TruncatedSteadyState {
  Eigen::VectorXcd psi1;  // single-excitation amplitudes
  Eigen::VectorXcd psi2;  // pair amplitudes, canonical pair order
};

// Solve H1 psi1 = -v_plus and H2 psi2 = -lift(psi1). For N = 1 pass an empty H2.
// Throws SingularSector when either sector is numerically singular.
TruncatedSteadyState solve_steady_state(const SectorOneMatrix& h1, const SectorTwoMatrix& h2,
                                        const DriveVectors& drive);
TruncatedSteadyState steady_state(const ChainConfig& cfg, std::span<const double> detunings);

// <phi1|psi1> and <phi2|psi2> for the given output port.
struct OutputAmplitudes {
  std::complex<double> single;
  std::complex<double> pair;
};
OutputAmplitudes output_amplitudes(const ProjectionVectors& proj, const TruncatedSteadyState& state, Output out);
CorrelationValue correlation_from_amplitudes(const OutputAmplitudes& a, Output out);
CorrelationValue correlation_from_state(const ChainConfig& cfg, const TruncatedSteadyState& state, Output out);

CorrelationValue g_transmission(const ChainConfig& cfg, std::span<const double> detunings);
// Throws Unsupported when gamma_r == 0.
CorrelationValue g_reflection(const ChainConfig& cfg, std::span<const double> detunings);
CorrelationValue g_correlation(const ChainConfig& cfg, std::span<const double> detunings, Output out);
CorrelationValue g_clean(const ChainConfig& cfg, Output out);

// Strong-disorder approximation: every photon leaves the qubit that absorbed it.
TruncatedSteadyState noninteracting_state(const ChainConfig& cfg, std::span<const double> detunings);
CorrelationValue g_noninteracting(const ChainConfig& cfg, std::span<const double> detunings, Output out);

// Reusable per-thread evaluator of the exact truncated correlations. Holds the
// disorder-independent parts of both sectors and the factorization buffers.
// Not thread-safe; give each worker its own instance.
class CorrelationEvaluator {
 public:
  explicit CorrelationEvaluator(const ChainConfig& cfg,
                                int dense_limit = SectorTwoMatrix::default_dense_limit);
  ~CorrelationEvaluator();
  CorrelationEvaluator(CorrelationEvaluator&&) noexcept;
  CorrelationEvaluator& operator=(CorrelationEvaluator&&) noexcept;

  const ChainConfig& config() const noexcept { return cfg_; }

  // Solve both sectors for this sample. Throws SingularSector.
  void solve(std::span<const double> detunings);
  // Correlation of the most recent solve.
  CorrelationValue correlation(Output out) const;
  OutputAmplitudes amplitudes(Output out) const;
  const TruncatedSteadyState& state() const noexcept { return state_; }

  CorrelationValue evaluate(std::span<const double> detunings, Output out) {
    check_output(out);
    solve(detunings);
    return correlation(out);
  }

  // log g and its gradient with respect to the detunings, by implicit
  // differentiation of both sector solves. Dense path only.
  struct LogGradient {
    double log_g = 0.0;
    std::vector<double> gradient;
    bool divergent = false;
  };
  LogGradient log_g_gradient(std::span<const double> detunings, Output out);

 private:
  void check_output(Output out) const;
  void solve_dense(std::span<const double> detunings);
  void solve_sparse(std::span<const double> detunings);

  ChainConfig cfg_;
  int n_;
  std::size_t pairs_;
  bool dense_;
  Eigen::MatrixXcd hop_;
  std::vector<std::complex<double>> h2_template_;  // column-major, off-diagonal only
  std::vector<std::pair<int, int>> pair_sites_;    // 0-based (m, n)
  DriveVectors drive_;
  // Conjugated projection rows: a1 = sum c1[m] psi1[m], a2 = sum c2[k] psi2[k].
  Eigen::VectorXcd c1_t_, c1_r_, c2_t_, c2_r_;
  DenseLu lu1_, lu2_;
  TruncatedSteadyState state_;
  struct SparseSolver;
  std::unique_ptr<SparseSolver> sparse_;
};

// Evaluates the strong-disorder approximation without any matrix work.
class NonInteractingEvaluator {
 public:
  explicit NonInteractingEvaluator(const ChainConfig& cfg);
  CorrelationValue evaluate(std::span<const double> detunings, Output out) const;

 private:
  ChainConfig cfg_;
  std::vector<std::complex<double>> double_phase_;  // e^{2 i m phi}
};

}  // namespace wgqed
