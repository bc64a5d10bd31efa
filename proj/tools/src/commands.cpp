#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wgqed/analysis.hpp"
#include "wgqed/closed_forms.hpp"
#include "wgqed/correlations.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/hamiltonian.hpp"

namespace wgqed::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view short_name(Output out) { return out == Output::transmission ? "g_T" : "g_R"; }

// Runs fn against the configured output file, or stdout when none is set.
void with_output(const RunConfig& cfg, Streams io, const std::function<void(std::ostream&)>& fn) {
  if (!cfg.out) {
    fn(io.out);
    return;
  }
  if (cfg.out->has_parent_path()) fs::create_directories(cfg.out->parent_path());
  std::ofstream f(*cfg.out);
  if (!f) throw ConfigError("cannot open output file " + cfg.out->string());
  fn(f);
}

const std::vector<double>& require_detunings(const RunConfig& cfg, const char* command) {
  if (!cfg.detunings) throw ConfigError(std::string(command) + " needs 'detunings' in the config");
  return *cfg.detunings;
}

json pa_json(const PaEstimate& pa, const RunConfig& cfg) {
  return {{"config_hash", cfg.hash()},      {"probability", pa.probability}, {"stderr", pa.standard_error},
          {"K", pa.realizations},           {"antibunched", pa.antibunched}, {"divergent", pa.divergent},
          {"discarded", pa.discarded},      {"seed", cfg.mc.seed}};
}

// --- sweep -------------------------------------------------------------------

struct CellResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t realizations = 0;
  std::uint64_t seed = 0;
};

CellResult compute_cell(const RunConfig& cfg, const std::vector<std::size_t>& index, std::uint64_t flat, int threads) {
  ChainConfig chain = cfg.chain;
  McConfig mc = cfg.mc;
  for (std::size_t a = 0; a < cfg.sweep.axes.size(); ++a) {
    const auto& axis = cfg.sweep.axes[a];
    const double v = axis.values[index[a]];
    if (axis.name == "N")
      chain.n_qubits = static_cast<int>(std::lround(v));
    else if (axis.name == "phase")
      chain.phase = v;
    else if (axis.name == "phase_pi")
      chain.phase = v * std::numbers::pi;
    else if (axis.name == "W")
      mc.disorder_std = v;
    else if (axis.name == "gamma_nw")
      chain.gamma_nw = v;
    else if (axis.name == "chirality")
      chain.gamma_r = v * chain.gamma_t;
  }

  CellResult r;
  if (cfg.sweep.quantity == SweepQuantity::g_clean) {
    r.value = g_clean(chain, mc.output).value();
    return r;
  }
  mc.seed = cfg.mc.seed + flat;
  r.seed = mc.seed;
  r.realizations = mc.realizations;
  const auto h = estimate_pdf(chain, mc, threads, cfg.binning);
  if (cfg.sweep.quantity == SweepQuantity::pa_probability) {
    const auto pa = pa_from_histogram(h);
    r.value = pa.probability;
    r.std_error = pa.standard_error;
  } else {
    const int bin = h.bin_of(cfg.sweep.s0);
    if (bin < 0 || bin >= h.bins()) throw ConfigError("sweep.s0 lies outside the histogram binning");
    r.value = h.density(bin);
    r.std_error = std::sqrt(static_cast<double>(h.count(bin))) / (static_cast<double>(h.total()) * h.width(bin));
  }
  return r;
}

std::optional<CellResult> load_checkpoint(const fs::path& file, const std::string& hash) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("config_hash").get<std::string>() != hash) return std::nullopt;
    return CellResult{j.at("value").get<double>(), j.at("stderr").get<double>(), j.at("K").get<std::uint64_t>(),
                      j.at("seed").get<std::uint64_t>()};
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void save_checkpoint(const fs::path& file, const std::string& hash, const CellResult& r) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << json{{"config_hash", hash}, {"value", r.value}, {"stderr", r.std_error}, {"K", r.realizations},
                {"seed", r.seed}}
               .dump();
  }
  fs::rename(tmp, file);
}

std::string quantity_name(const SweepSpec& s) {
  switch (s.quantity) {
    case SweepQuantity::pa_probability:
      return "P(s<1)";
    case SweepQuantity::density: {
      std::ostringstream os;
      os << "P(" << s.s0 << ")";
      return os.str();
    }
    case SweepQuantity::g_clean:
      return "g_clean";
  }
  return {};
}

// --- selfcheck ---------------------------------------------------------------

class CheckList {
 public:
  explicit CheckList(std::ostream& os) : os_(os) {}
  void report(bool pass, const std::string& name, const std::string& detail) {
    os_ << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    failures_ += pass ? 0 : 1;
  }
  int failures() const noexcept { return failures_; }

 private:
  std::ostream& os_;
  int failures_ = 0;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

int cmd_eval(const RunConfig& cfg, const CommandOptions& opt, Streams io) {
  const auto& d = require_detunings(cfg, "eval");
  bool divergent = false;
  with_output(cfg, io, [&](std::ostream& os) {
    os << "# config_hash=" << cfg.hash() << "\n";
    for (Output out : cfg.outputs) {
      const auto g = g_correlation(cfg.chain, d, out);
      divergent = divergent || g.is_divergent();
      os << short_name(out) << " " << g.to_string(12) << "\n";
    }
  });
  return opt.strict && divergent ? exit_divergent : exit_ok;
}

int cmd_pa(const RunConfig& cfg, const CommandOptions& opt, Streams io) {
  const auto pa = estimate_pa_probability(cfg.chain, cfg.mc, opt.threads);
  with_output(cfg, io, [&](std::ostream& os) { os << pa_json(pa, cfg).dump() << "\n"; });
  return exit_ok;
}

int cmd_pdf(const RunConfig& cfg, const CommandOptions& opt, Streams io) {
  auto h = estimate_pdf(cfg.chain, cfg.mc, opt.threads, cfg.binning);
  h.config_hash = cfg.hash();
  with_output(cfg, io, [&](std::ostream& os) { os << h.to_json() << "\n"; });
  return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, Streams io) {
  if (cfg.sweep.axes.empty()) throw ConfigError("sweep needs a 'sweep' section with axes");
  const std::string hash = cfg.hash();

  std::optional<fs::path> ckpt = cfg.sweep.checkpoint_dir;
  if (!ckpt && cfg.out) ckpt = fs::path(cfg.out->string() + ".cells");
  if (ckpt) fs::create_directories(*ckpt);

  SweepGrid grid;
  grid.config_hash = hash;
  grid.quantity = quantity_name(cfg.sweep);
  for (const auto& a : cfg.sweep.axes) grid.axes.push_back({a.name, a.values});

  const std::size_t total = grid.expected_cells();
  std::vector<std::size_t> index(grid.axes.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      index[a] = rest % grid.axes[a].values.size();
      rest /= grid.axes[a].values.size();
    }
    const fs::path file = ckpt ? *ckpt / ("cell_" + std::to_string(flat) + ".json") : fs::path{};
    std::optional<CellResult> r = ckpt ? load_checkpoint(file, hash) : std::nullopt;
    if (!r) {
      r = compute_cell(cfg, index, flat, opt.threads);
      if (ckpt) save_checkpoint(file, hash, *r);
      io.err << "cell " << flat + 1 << "/" << total << " value=" << r->value << "\n";
    }
    grid.cells.push_back({index, r->value, r->std_error, r->realizations, r->seed});
  }
  with_output(cfg, io, [&](std::ostream& os) { write_grid_csv(os, grid); });
  return exit_ok;
}

int cmd_nppb(const RunConfig& cfg, const CommandOptions&, Streams io) {
  const auto seed = find_seed_solution(cfg.chain, cfg.manifold);
  const auto set = enumerate_manifold(cfg.chain, cfg.manifold, seed);
  with_output(cfg, io, [&](std::ostream& os) { write_solutions_jsonl(os, set, cfg.hash()); });
  return exit_ok;
}

int cmd_timedomain(const RunConfig& cfg, const CommandOptions& opt, Streams io) {
  if (!cfg.detunings) {
    const auto factory = make_timedomain_factory(cfg.chain, cfg.pulse, cfg.mc.output);
    const auto pa = pa_from_histogram(run_histogram(cfg.chain, cfg.mc, factory, opt.threads, cfg.binning));
    with_output(cfg, io, [&](std::ostream& os) { os << pa_json(pa, cfg).dump() << "\n"; });
    return exit_ok;
  }

  const auto& d = *cfg.detunings;
  const auto traj = evolve(cfg.chain, d, cfg.pulse, opt.stride);
  const bool has_r = cfg.chain.gamma_r > 0.0;
  if (opt.trajectory) {
    std::ofstream csv(*opt.trajectory);
    if (!csv) throw ConfigError("cannot open trajectory file " + opt.trajectory->string());
    csv << "# config_hash=" << cfg.hash() << "\nt";
    for (int m = 1; m <= cfg.chain.n_qubits; ++m) csv << ",abs_c1_" << m;
    csv << ",g_T,g_R\n" << std::setprecision(12);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double e = cfg.pulse.envelope(traj.times[i]);
      csv << traj.times[i];
      for (Eigen::Index m = 0; m < traj.c1[i].size(); ++m) csv << "," << std::abs(traj.c1[i][m]);
      csv << "," << g_from_amplitudes(cfg.chain, traj.c1[i], traj.c2[i], e, Output::transmission).value();
      if (has_r)
        csv << "," << g_from_amplitudes(cfg.chain, traj.c1[i], traj.c2[i], e, Output::reflection).value();
      else
        csv << ",nan";
      csv << "\n";
    }
  }

  bool divergent = false;
  with_output(cfg, io, [&](std::ostream& os) {
    os << "# config_hash=" << cfg.hash() << "\n";
    os << "tau " << std::setprecision(12) << traj.times.back() << "\n";
    for (Output out : cfg.outputs) {
      if (out == Output::reflection && !has_r) continue;
      const auto g = g_at_time(traj, traj.times.back(), out, cfg.pulse);
      divergent = divergent || g.is_divergent();
      os << short_name(out) << " " << g.to_string(12) << "\n";
    }
    if (!traj.weak_drive_ok) os << "# warning: amplitudes left the weak-drive regime\n";
  });
  return opt.strict && divergent ? exit_divergent : exit_ok;
}

int cmd_selfcheck(const CommandOptions& opt, Streams io) {
  constexpr double pi = std::numbers::pi;
  namespace cf = closed_forms;
  // The hook stands in for a wrong phase convention in the matrix path.
  auto matrix_cfg = [&](ChainConfig c) {
    if (opt.perturb_phase) c.phase *= 2.0;
    return c;
  };
  auto matrix_g = [&](const ChainConfig& c, const std::vector<double>& d, Output out) {
    return g_correlation(matrix_cfg(c), d, out);
  };

  CheckList checks(io.out);
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Anchors.
  {
    const double g = matrix_g(ChainConfig::symmetric(1, 0.0), {0.5}, Output::transmission).value();
    checks.report(std::abs(g - 4.0) <= 1e-12, "anchor single qubit", "g_T(Delta=0.5) = " + std::to_string(g));
  }
  {
    const std::vector<std::pair<double, std::vector<double>>> rows{
        {1e-8, {0.149124450372206, -0.053903424589490, 0.144085703957167}},
        {1e-10, {0.148134188883455, -0.055253952848190, 0.144762975264912}},
        {1e-12, {0.149005562567387, -0.054129160721382, 0.144182673551411}},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [target, d] : rows) {
      const double g = matrix_g(ChainConfig::symmetric(3, 0.04 * pi), d, Output::transmission).value();
      ok = ok && std::abs(g - target) <= 0.1 * target;
      detail += " " + sci(g);
    }
    checks.report(ok, "anchor blockade points", "g_T =" + detail + " (targets 1e-8, 1e-10, 1e-12)");
  }
  {
    const double g = matrix_g(ChainConfig::symmetric(2, 0.4 * pi), {0.0, 0.0}, Output::reflection).value();
    checks.report(std::abs(g - 1.0) <= 1e-12, "anchor clean pair reflection", "g_R = " + std::to_string(g));
  }

  // Closed forms against the matrix path.
  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double d1 = 1.5 * gauss(rng), d2 = 1.5 * gauss(rng), phi = 2 * pi * unit(rng), gnw = 3 * unit(rng);
      const auto c2 = ChainConfig::symmetric(2, phi);
      worst = std::max({worst,
                        rel_err(cf::gT_n1(d1).value(), matrix_g(ChainConfig::symmetric(1, phi), {d1}, Output::transmission).value()),
                        rel_err(cf::gT_n1_lossy(d1, gnw).value(),
                                matrix_g(ChainConfig::symmetric(1, phi, gnw), {d1}, Output::transmission).value()),
                        rel_err(cf::gT_n2(d1, d2, phi).value(), matrix_g(c2, {d1, d2}, Output::transmission).value()),
                        rel_err(cf::gR_n2(d1, d2, phi).value(), matrix_g(c2, {d1, d2}, Output::reflection).value())});
    }
    checks.report(worst <= 1e-9, "closed forms vs matrix path", "1000 points, worst relative error " + sci(worst));
  }

  // Sector matrices against the full-space construction.
  {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
      for (int t = 0; t < 5; ++t) {
        const ChainConfig c{n, 2 * pi * unit(rng), 0.1 + unit(rng), 0.1 + unit(rng), 0.5 * unit(rng)};
        std::vector<double> d(static_cast<std::size_t>(n));
        for (auto& x : d) x = gauss(rng);
        const auto full = brute_force_heff(c, d);
        const Eigen::MatrixXcd h1 = build_sector1(matrix_cfg(c), d);
        worst = std::max(worst, (h1 - full.sector1()).cwiseAbs().maxCoeff() / h1.cwiseAbs().maxCoeff());
        if (n >= 2) {
          const Eigen::MatrixXcd h2 = build_sector2(matrix_cfg(c), d).to_dense();
          worst = std::max(worst, (h2 - full.sector2()).cwiseAbs().maxCoeff() / h2.cwiseAbs().maxCoeff());
        }
      }
    checks.report(worst <= 1e-12, "brute-force Hamiltonian N<=6", "worst relative deviation " + sci(worst));
  }

  // 2 pi periodicity.
  {
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const int n = 1 + t % 8;
      ChainConfig c{n, 2 * pi * unit(rng), 0.1 + unit(rng), 0.1 + unit(rng), 0.5 * unit(rng)};
      std::vector<double> d(static_cast<std::size_t>(n));
      for (auto& x : d) x = gauss(rng);
      auto shifted = c;
      shifted.phase += 2 * pi;
      for (Output out : {Output::transmission, Output::reflection})
        worst = std::max(worst, rel_err(matrix_g(shifted, d, out).value(), matrix_g(c, d, out).value()));
    }
    checks.report(worst <= 1e-10, "phase periodicity", "40 instances, worst relative error " + sci(worst));
  }

  // Determinism across thread counts.
  {
    McConfig mc;
    mc.realizations = 5000;
    mc.disorder_std = 0.7;
    mc.seed = 5;
    const auto c = ChainConfig::symmetric(3, 0.1 * pi);
    const bool same = estimate_pdf(c, mc, 1) == estimate_pdf(c, mc, 3);
    checks.report(same, "thread determinism", "histogram counters for 1 and 3 threads");
  }

  io.out << (checks.failures() == 0 ? "selfcheck passed\n" : "selfcheck failed\n");
  return checks.failures() == 0 ? exit_ok : exit_failure;
}

}  // namespace wgqed::cli
