#include "wgqed/nppb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "wgqed/errors.hpp"
#include "wgqed/random.hpp"

namespace wgqed {

namespace {

constexpr int kMaxNewtonIterations = 200;
constexpr int kMaxHalvings = 30;
constexpr int kStallWindow = 50;
constexpr double kStallReduction = 1e-3;
constexpr double kResidualTarget = 1e-8;
// Streams of the seed search and of the continuation walkers live in disjoint
// index ranges of the same key.
constexpr std::uint64_t kWalkerStreamBase = std::uint64_t{1} << 40;

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Buckets points by their cell of side `sep` so that duplicate checks touch
// only neighbouring cells.
class SeparationIndex {
 public:
  SeparationIndex(double sep, std::vector<std::size_t> coords) : sep_(sep), coords_(std::move(coords)) {}

  bool has_neighbour(std::span<const double> x, const std::vector<ManifoldPoint>& pts) const {
    std::array<long long, 3> base{};
    const std::size_t d = coords_.size();
    for (std::size_t i = 0; i < d; ++i) base[i] = cell(x[coords_[i]]);
    const int combos = d == 1 ? 3 : d == 2 ? 9 : 27;
    for (int c = 0; c < combos; ++c) {
      std::array<long long, 3> key = base;
      int code = c;
      for (std::size_t i = 0; i < d; ++i) {
        key[i] += code % 3 - 1;
        code /= 3;
      }
      auto it = map_.find(hash(key));
      if (it == map_.end()) continue;
      for (std::size_t idx : it->second) {
        double dist = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) dist = std::max(dist, std::abs(x[j] - pts[idx].detunings[j]));
        if (dist < sep_) return true;
      }
    }
    return false;
  }

  void insert(std::span<const double> x, std::size_t idx) {
    std::array<long long, 3> key{};
    for (std::size_t i = 0; i < coords_.size(); ++i) key[i] = cell(x[coords_[i]]);
    map_[hash(key)].push_back(idx);
  }

 private:
  long long cell(double v) const { return static_cast<long long>(std::floor(v / sep_)); }
  static std::uint64_t hash(const std::array<long long, 3>& k) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (long long v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001B3ull + (h >> 29);
    return h;
  }

  double sep_;
  std::vector<std::size_t> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> map_;
};

}  // namespace

void validate_run(const ChainConfig& cfg, const ManifoldRun& run) {
  validate_config(cfg);
  if (!(run.epsilon > 0.0)) throw Error(ErrorCode::invalid_config, "epsilon must be > 0");
  if (!(run.box > 0.0)) throw Error(ErrorCode::invalid_config, "box must be > 0");
  if (!(run.tolerance > 0.0)) throw Error(ErrorCode::invalid_config, "tolerance must be > 0");
  if (run.walkers < 1) throw Error(ErrorCode::invalid_config, "walkers must be >= 1");
  const std::size_t prefix = cfg.n_qubits > 3 ? static_cast<std::size_t>(cfg.n_qubits - 3) : 0;
  if (run.fixed_prefix.size() != prefix)
    throw Error(ErrorCode::invalid_config, "fixed_prefix must hold the first N-3 detunings (" + std::to_string(prefix) +
                                               " values)");
  if (run.target == Output::reflection && cfg.gamma_r == 0.0)
    throw Error(ErrorCode::unsupported, "reflection output needs gamma_r > 0");
}

ManifoldSolver::ManifoldSolver(const ChainConfig& cfg, const ManifoldRun& run) : cfg_(cfg), run_(run), eval_(cfg) {
  validate_run(cfg, run);
  const std::size_t n = static_cast<std::size_t>(cfg.n_qubits);
  for (std::size_t i = n > 3 ? n - 3 : 0; i < n; ++i) free_.push_back(i);
}

bool ManifoldSolver::on_manifold(double g) const noexcept {
  return std::isfinite(g) && std::abs(g - run_.epsilon) <= run_.tolerance * run_.epsilon;
}

bool ManifoldSolver::inside_box(std::span<const double> x) const noexcept {
  for (std::size_t i : free_)
    if (!(std::abs(x[i]) <= run_.box)) return false;
  return true;
}

std::vector<double> ManifoldSolver::initial_point(std::uint64_t stream, std::uint64_t index) const {
  std::vector<double> x(static_cast<std::size_t>(cfg_.n_qubits));
  std::copy(run_.fixed_prefix.begin(), run_.fixed_prefix.end(), x.begin());
  SampleStream rng(stream, index);
  for (std::size_t i : free_) x[i] = run_.box * (2.0 * rng.uniform() - 1.0);
  return x;
}

std::vector<double> ManifoldSolver::free_gradient(std::span<const double> x, double* log_g) {
  auto lg = eval_.log_g_gradient(x, run_.target);
  std::vector<double> grad(x.size(), 0.0);
  if (log_g) *log_g = lg.log_g;
  if (lg.divergent || !std::isfinite(lg.log_g)) return grad;
  for (std::size_t i : free_) grad[i] = lg.gradient[i];
  return grad;
}

ProjectionResult ManifoldSolver::project(std::span<const double> start) {
  ProjectionResult res;
  res.detunings.assign(start.begin(), start.end());
  auto& x = res.detunings;
  const double log_eps = std::log(run_.epsilon);

  auto residual = [&](std::span<const double> y) {
    try {
      const auto g = eval_.evaluate(y, run_.target);
      if (g.is_divergent()) return std::numeric_limits<double>::infinity();
      return std::log(g.value()) - log_eps;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_sector) throw;
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> history;
  std::vector<double> trial(x.size());
  double r = 0.0;
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    double log_g = 0.0;
    std::vector<double> grad;
    try {
      grad = free_gradient(x, &log_g);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_sector) throw;
      break;
    }
    r = log_g - log_eps;
    res.iterations = it;
    if (!std::isfinite(r)) break;
    if (std::abs(r) < kResidualTarget) break;
    history.push_back(std::abs(r));
    if (history.size() > static_cast<std::size_t>(kStallWindow) &&
        history.back() > (1.0 - kStallReduction) * history[history.size() - 1 - kStallWindow])
      break;

    const double jj = dot(grad, grad);
    if (!(jj > 0.0) || !std::isfinite(jj)) break;
    // Minimum-norm Newton step for a single scalar equation.
    const double scale = -r / jj;
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, alpha *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * scale * grad[i];
      if (!inside_box(trial)) continue;
      if (std::abs(residual(trial)) < std::abs(r)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = trial;
  }

  const double rr = residual(x);
  res.g = std::isfinite(rr) ? run_.epsilon * std::exp(rr) : std::numeric_limits<double>::infinity();
  res.converged = on_manifold(res.g) && inside_box(x);
  return res;
}

std::vector<double> find_seed_solution(const ChainConfig& cfg, const ManifoldRun& run) {
  ManifoldSolver solver(cfg, run);
  const auto& free = solver.free_coordinates();
  std::vector<std::vector<double>> candidates;

  // Reduce sum Delta^2 along the manifold: step against the component of
  // grad(sum Delta^2) tangent to the level set, then re-project.
  auto descend = [&](std::vector<double> x) {
    double eta = 0.1;
    for (int it = 0; it < 200 && eta > 1e-10; ++it) {
      const auto j = solver.free_gradient(x);
      std::vector<double> t(x.size(), 0.0);
      for (std::size_t i : free) t[i] = 2.0 * x[i];
      const double jj = dot(j, j);
      if (jj > 0.0) {
        const double c = dot(t, j) / jj;
        for (std::size_t i : free) t[i] -= c * j[i];
      }
      if (std::sqrt(dot(t, t)) < 1e-10) break;
      std::vector<double> y = x;
      for (std::size_t i : free) y[i] -= eta * t[i];
      const auto p = solver.project(y);
      if (p.converged && sum_sq(p.detunings) < sum_sq(x)) {
        x = p.detunings;
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    return x;
  };

  for (int restart = 0; restart < run.max_restarts; ++restart) {
    const auto x0 = solver.initial_point(run.seed, static_cast<std::uint64_t>(restart));
    const auto p = solver.project(x0);
    if (!p.converged) continue;
    candidates.push_back(descend(p.detunings));
    if (static_cast<int>(candidates.size()) >= std::max(1, run.seed_candidates)) break;
  }
  if (candidates.empty())
    throw Error(ErrorCode::no_solution_found,
                "no start reached g = " + std::to_string(run.epsilon) + " after " + std::to_string(run.max_restarts) +
                    " restarts");
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const auto& a, const auto& b) { return sum_sq(a) < sum_sq(b); });
}

namespace {

ManifoldSolutionSet walk(const ChainConfig& cfg, const ManifoldRun& run, const ManifoldPoint& seed, int walker,
                         std::size_t target) {
  ManifoldSolver solver(cfg, run);
  const auto& free = solver.free_coordinates();
  ManifoldSolutionSet set;
  SeparationIndex index(run.min_separation, free);
  set.points.push_back(seed);
  index.insert(seed.detunings, 0);

  const std::uint64_t walker_seed = run.seed + static_cast<std::uint64_t>(walker);
  SampleStream rng(run.seed, kWalkerStreamBase + static_cast<std::uint64_t>(walker));
  std::size_t failures = 0;
  std::vector<double> v(seed.detunings.size());
  while (set.points.size() < target && failures < run.max_failures) {
    ++set.attempts;
    const auto& base = set.points[static_cast<std::size_t>(rng.next_u64() % set.points.size())].detunings;
    const auto j = solver.free_gradient(base);
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i : free) v[i] = rng.normal();
    const double jj = dot(j, j);
    if (jj > 0.0) {
      const double c = dot(v, j) / jj;
      for (std::size_t i : free) v[i] -= c * j[i];
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 0.0)) {
      ++failures;
      continue;
    }
    std::vector<double> y = base;
    for (std::size_t i : free) y[i] += run.step_length * v[i] / norm;
    if (!solver.inside_box(y)) {
      ++failures;
      continue;
    }
    auto p = solver.project(y);
    if (!p.converged) {
      ++set.boundary_points;
      ++failures;
      continue;
    }
    if (index.has_neighbour(p.detunings, set.points)) {
      ++failures;
      continue;
    }
    failures = 0;
    index.insert(p.detunings, set.points.size());
    set.points.push_back({std::move(p.detunings), p.g, walker_seed, p.iterations});
  }
  return set;
}

}  // namespace

ManifoldSolutionSet enumerate_manifold(const ChainConfig& cfg, const ManifoldRun& run,
                                       std::span<const double> seed_solution) {
  validate_run(cfg, run);
  check_sample(cfg, seed_solution);
  ManifoldSolver solver(cfg, run);
  const auto first = solver.project(seed_solution);
  if (!first.converged)
    throw Error(ErrorCode::step_failed, "seed solution does not converge onto the manifold");
  const ManifoldPoint seed{first.detunings, first.g, run.seed, first.iterations};
  if (run.k_sols_max <= 1) return {{seed}, 0, 0};

  const auto walkers = static_cast<std::size_t>(run.walkers);
  const std::size_t per_walker = (run.k_sols_max + walkers - 1) / walkers;
  std::vector<ManifoldSolutionSet> parts(walkers);
  if (walkers == 1) {
    parts[0] = walk(cfg, run, seed, 0, per_walker);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(walkers);
    for (std::size_t w = 0; w < walkers; ++w)
      pool.emplace_back([&, w] {
        try {
          parts[w] = walk(cfg, run, seed, static_cast<int>(w), per_walker);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ManifoldSolutionSet out;
  SeparationIndex index(run.min_separation, solver.free_coordinates());
  for (auto& part : parts) {
    out.boundary_points += part.boundary_points;
    out.attempts += part.attempts;
    for (auto& p : part.points) {
      if (out.points.size() >= run.k_sols_max) break;
      if (index.has_neighbour(p.detunings, out.points)) continue;
      index.insert(p.detunings, out.points.size());
      out.points.push_back(std::move(p));
    }
  }
  return out;
}

BoxMinimum min_g_over_box(const ChainConfig& cfg, Output out, double box, int starts, std::uint64_t seed) {
  validate_config(cfg);
  if (!(box > 0.0)) throw Error(ErrorCode::invalid_config, "box must be > 0");
  const auto n = static_cast<std::size_t>(cfg.n_qubits);
  CorrelationEvaluator eval(cfg);

  auto objective = [&](std::span<const double> x, std::vector<double>* grad) {
    try {
      if (grad) {
        auto lg = eval.log_g_gradient(x, out);
        if (lg.divergent) return std::numeric_limits<double>::infinity();
        *grad = std::move(lg.gradient);
        return lg.log_g;
      }
      const auto g = eval.evaluate(x, out);
      return g.is_divergent() ? std::numeric_limits<double>::infinity() : std::log(g.value());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_sector) throw;
      return std::numeric_limits<double>::infinity();
    }
  };
  auto clip = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, -box, box);
  };

  BoxMinimum best{std::numeric_limits<double>::infinity(), {}};
  for (int s = 0; s < std::max(1, starts); ++s) {
    std::vector<double> x(n);
    SampleStream rng(seed, static_cast<std::uint64_t>(s));
    for (double& v : x) v = box * (2.0 * rng.uniform() - 1.0);

    std::vector<double> grad;
    double f = objective(x, &grad);
    if (f == -std::numeric_limits<double>::infinity()) return {0.0, x};
    if (!std::isfinite(f)) continue;

    // Projected BFGS with Armijo backtracking.
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (int it = 0; it < 400; ++it) {
      const Eigen::Map<const Eigen::VectorXd> gv(grad.data(), static_cast<Eigen::Index>(n));
      Eigen::VectorXd dir = -h * gv;
      if (gv.dot(dir) >= 0.0) {
        h.setIdentity();
        dir = -gv;
      }
      double alpha = 1.0;
      std::vector<double> y(n), gy;
      double fy = f;
      bool ok = false;
      for (int k = 0; k < 40; ++k, alpha *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + alpha * dir[static_cast<Eigen::Index>(i)];
        clip(y);
        double decrease = 0.0;
        for (std::size_t i = 0; i < n; ++i) decrease += grad[i] * (y[i] - x[i]);
        fy = objective(y, nullptr);
        if (fy == -std::numeric_limits<double>::infinity()) return {0.0, y};
        if (fy <= f + 1e-4 * decrease && fy < f) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        if (!h.isIdentity()) {
          h.setIdentity();
          continue;
        }
        break;
      }
      fy = objective(y, &gy);
      Eigen::VectorXd sv(static_cast<Eigen::Index>(n)), yv(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        sv[static_cast<Eigen::Index>(i)] = y[i] - x[i];
        yv[static_cast<Eigen::Index>(i)] = gy[i] - grad[i];
      }
      const double sy = sv.dot(yv);
      if (sy > 1e-12 * sv.norm() * yv.norm()) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(h.rows(), h.cols());
        h = (id - rho * sv * yv.transpose()) * h * (id - rho * yv * sv.transpose()) + rho * sv * sv.transpose();
      }
      const double change = f - fy;
      x = y;
      grad = gy;
      f = fy;
      if (change < 1e-13 * (1.0 + std::abs(f))) break;
    }
    const double g = std::exp(f);
    if (g < best.value) best = {g, x};
  }
  if (best.argmin.empty()) throw Error(ErrorCode::no_solution_found, "no start produced a finite correlation");
  return best;
}

void write_solutions_jsonl(std::ostream& os, const ManifoldSolutionSet& set, std::string_view config_hash) {
  nlohmann::json header{{"config_hash", std::string(config_hash)}, {"solutions", set.points.size()},
                        {"boundary_points", set.boundary_points}};
  os << header.dump() << "\n";
  for (const auto& p : set.points) {
    nlohmann::json j{{"detunings", p.detunings}, {"g", p.g}, {"walker_seed", p.walker_seed},
                     {"iterations", p.iterations}};
    os << j.dump() << "\n";
  }
}

}  // namespace wgqed
