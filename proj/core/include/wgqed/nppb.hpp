#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wgqed/correlations.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

struct ManifoldRun {
  Output target = Output::transmission;
  double epsilon = 1e-10;
  std::size_t k_sols_max = 100000;
  double box = 1.0;                  // |Delta_j| <= box
  std::vector<double> fixed_prefix;  // first N-3 detunings when N > 3
  int max_restarts = 200;
  int seed_candidates = 4;           // successful projections compared by sum Delta^2
  double min_separation = 1e-4;      // infinity norm
  double step_length = 1e-2;
  double tolerance = 0.1;            // accept |g - eps| / eps <= tolerance
  std::uint64_t seed = 1;
  int walkers = 1;
  // Continuation gives up after this many consecutive rejected steps.
  std::size_t max_failures = 2000;
};

void validate_run(const ChainConfig& cfg, const ManifoldRun& run);

struct ManifoldPoint {
  std::vector<double> detunings;
  double g = 0.0;
  std::uint64_t walker_seed = 0;
  int iterations = 0;
};

struct ManifoldSolutionSet {
  std::vector<ManifoldPoint> points;
  std::size_t boundary_points = 0;  // corrector failures (StepFailed)
  std::size_t attempts = 0;
};

// Damped Gauss-Newton on r = log g - log eps over the free coordinates (all
// of them for N <= 3, the last three otherwise).
struct ProjectionResult {
  std::vector<double> detunings;
  double g = 0.0;
  int iterations = 0;
  bool converged = false;
};

class ManifoldSolver {
 public:
  ManifoldSolver(const ChainConfig& cfg, const ManifoldRun& run);

  // Newton-project x onto g = eps. Sets converged = false when the residual
  // stalls (relative reduction < 1e-3 over 50 iterations) or leaves the box.
  ProjectionResult project(std::span<const double> start);
  // Gradient of log g restricted to the free coordinates, zero elsewhere.
  std::vector<double> free_gradient(std::span<const double> x, double* log_g = nullptr);

  const std::vector<std::size_t>& free_coordinates() const noexcept { return free_; }
  bool on_manifold(double g) const noexcept;
  bool inside_box(std::span<const double> x) const noexcept;
  std::vector<double> initial_point(std::uint64_t stream, std::uint64_t index) const;

 private:
  ChainConfig cfg_;
  ManifoldRun run_;
  CorrelationEvaluator eval_;
  std::vector<std::size_t> free_;
};

// Throws NoSolutionFound when no start reaches the manifold.
std::vector<double> find_seed_solution(const ChainConfig& cfg, const ManifoldRun& run);

// Throws StepFailed if the seed itself cannot be projected.
ManifoldSolutionSet enumerate_manifold(const ChainConfig& cfg, const ManifoldRun& run,
                                       std::span<const double> seed_solution);

struct BoxMinimum {
  double value = 0.0;
  std::vector<double> argmin;
};

// Multi-start projected quasi-Newton minimization of log g over |Delta_j| <= box.
// Heuristic; returns the best point found.
BoxMinimum min_g_over_box(const ChainConfig& cfg, Output out, double box, int starts = 32,
                          std::uint64_t seed = 1);

// One JSON object per line: detunings, g, walker_seed, iterations.
void write_solutions_jsonl(std::ostream& os, const ManifoldSolutionSet& set, std::string_view config_hash);

}  // namespace wgqed
