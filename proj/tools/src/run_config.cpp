#include "run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>

#include "wgqed/errors.hpp"

namespace wgqed::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& into, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

double read_number(const json& j, const char* key, const std::string& where) {
  double v = 0.0;
  read(j, key, v, where);
  return v;
}

Output parse_output(const std::string& s, const std::string& where) {
  try {
    return output_from_string(s);
  } catch (const Error&) {
    throw ConfigError(where + ": output must be 'transmission' or 'reflection', got '" + s + "'");
  }
}

void parse_chain(const json& j, ChainConfig& c) {
  const std::string w = "chain";
  reject_unknown(j, w, {"n_qubits", "phase", "phase_pi", "gamma_t", "gamma_r", "gamma_nw"});
  if (j.contains("phase") && j.contains("phase_pi")) throw ConfigError("chain: give phase or phase_pi, not both");
  read(j, "n_qubits", c.n_qubits, w);
  read(j, "phase", c.phase, w);
  if (j.contains("phase_pi")) c.phase = read_number(j, "phase_pi", w) * std::numbers::pi;
  read(j, "gamma_t", c.gamma_t, w);
  read(j, "gamma_r", c.gamma_r, w);
  read(j, "gamma_nw", c.gamma_nw, w);
}

void parse_mc(const json& j, McConfig& mc) {
  const std::string w = "mc";
  reject_unknown(j, w, {"realizations", "disorder_std", "seed", "output", "evaluator", "first_index"});
  read(j, "realizations", mc.realizations, w);
  read(j, "disorder_std", mc.disorder_std, w);
  read(j, "seed", mc.seed, w);
  read(j, "first_index", mc.first_index, w);
  if (j.contains("output")) {
    std::string s;
    read(j, "output", s, w);
    mc.output = parse_output(s, w);
  }
  if (j.contains("evaluator")) {
    std::string s;
    read(j, "evaluator", s, w);
    if (s == "exact")
      mc.evaluator = EvaluatorKind::exact;
    else if (s == "noninteracting")
      mc.evaluator = EvaluatorKind::noninteracting;
    else
      throw ConfigError("mc.evaluator must be 'exact' or 'noninteracting'");
  }
}

void parse_binning(const json& j, LogBinning& b) {
  const std::string w = "binning";
  reject_unknown(j, w, {"min_decade", "max_decade", "per_decade"});
  read(j, "min_decade", b.min_decade, w);
  read(j, "max_decade", b.max_decade, w);
  read(j, "per_decade", b.per_decade, w);
  if (b.per_decade < 1 || b.max_decade <= b.min_decade)
    throw ConfigError("binning needs per_decade >= 1 and max_decade > min_decade");
  if (b.min_decade > 0 || b.max_decade < 0) throw ConfigError("binning must contain s = 1");
}

void parse_pulse(const json& j, PulseConfig& p) {
  const std::string w = "pulse";
  reject_unknown(j, w, {"shape", "bandwidth", "mean_amplitude", "arrival", "t_start", "t_end", "dt"});
  if (j.contains("shape")) {
    std::string s;
    read(j, "shape", s, w);
    if (s == "lorentzian")
      p.shape = PulseShape::lorentzian;
    else if (s == "constant")
      p.shape = PulseShape::constant;
    else
      throw ConfigError("pulse.shape must be 'lorentzian' or 'constant'");
  }
  read(j, "bandwidth", p.bandwidth, w);
  read(j, "mean_amplitude", p.mean_amplitude, w);
  read(j, "arrival", p.arrival, w);
  read(j, "dt", p.dt, w);
  if (j.contains("t_start")) p.t_start = read_number(j, "t_start", w);
  if (j.contains("t_end")) p.t_end = read_number(j, "t_end", w);
}

void parse_manifold(const json& j, ManifoldRun& r) {
  const std::string w = "manifold";
  reject_unknown(j, w,
                 {"target", "epsilon", "k_sols_max", "box", "fixed_prefix", "max_restarts", "seed_candidates",
                  "min_separation", "step_length", "tolerance", "seed", "walkers", "max_failures"});
  if (j.contains("target")) {
    std::string s;
    read(j, "target", s, w);
    r.target = parse_output(s, w);
  }
  read(j, "epsilon", r.epsilon, w);
  read(j, "k_sols_max", r.k_sols_max, w);
  read(j, "box", r.box, w);
  read(j, "fixed_prefix", r.fixed_prefix, w);
  read(j, "max_restarts", r.max_restarts, w);
  read(j, "seed_candidates", r.seed_candidates, w);
  read(j, "min_separation", r.min_separation, w);
  read(j, "step_length", r.step_length, w);
  read(j, "tolerance", r.tolerance, w);
  read(j, "seed", r.seed, w);
  read(j, "walkers", r.walkers, w);
  read(j, "max_failures", r.max_failures, w);
}

void parse_sweep(const json& j, SweepSpec& s) {
  const std::string w = "sweep";
  reject_unknown(j, w, {"axes", "quantity", "s0", "checkpoint_dir"});
  if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty())
    throw ConfigError("sweep.axes must be a non-empty array");
  std::set<std::string> seen;
  for (const auto& a : j.at("axes")) {
    reject_unknown(a, "sweep.axes[]", {"name", "values"});
    SweepAxisSpec axis;
    read(a, "name", axis.name, "sweep.axes[]");
    read(a, "values", axis.values, "sweep.axes[]");
    static const std::set<std::string> names{"N", "phase", "phase_pi", "W", "gamma_nw", "chirality"};
    if (!names.count(axis.name)) throw ConfigError("sweep axis '" + axis.name + "' is not one of N, phase, phase_pi, W, gamma_nw, chirality");
    const std::string key = axis.name == "phase_pi" ? "phase" : axis.name;
    if (!seen.insert(key).second) throw ConfigError("sweep axis '" + axis.name + "' given twice");
    if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.name + "' has no values");
    s.axes.push_back(std::move(axis));
  }
  if (j.contains("quantity")) {
    std::string q;
    read(j, "quantity", q, w);
    if (q == "pa")
      s.quantity = SweepQuantity::pa_probability;
    else if (q == "density")
      s.quantity = SweepQuantity::density;
    else if (q == "g_clean")
      s.quantity = SweepQuantity::g_clean;
    else
      throw ConfigError("sweep.quantity must be 'pa', 'density' or 'g_clean'");
  }
  read(j, "s0", s.s0, w);
  if (!(s.s0 > 0.0)) throw ConfigError("sweep.s0 must be > 0");
  if (j.contains("checkpoint_dir")) {
    std::string d;
    read(j, "checkpoint_dir", d, w);
    s.checkpoint_dir = d;
  }
}

}  // namespace

std::string RunConfig::hash() const { return fnv1a_hex(canonical.dump()); }

RunConfig parse_run_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"chain", "detunings", "mc", "binning", "pulse", "manifold", "sweep", "outputs", "out"});
  RunConfig cfg;
  if (doc.contains("chain")) parse_chain(doc.at("chain"), cfg.chain);
  if (doc.contains("detunings")) {
    std::vector<double> d;
    read(doc, "detunings", d, "config");
    cfg.detunings = std::move(d);
  }
  if (doc.contains("mc")) parse_mc(doc.at("mc"), cfg.mc);
  if (doc.contains("binning")) parse_binning(doc.at("binning"), cfg.binning);
  if (doc.contains("pulse")) parse_pulse(doc.at("pulse"), cfg.pulse);
  if (doc.contains("manifold")) parse_manifold(doc.at("manifold"), cfg.manifold);
  if (doc.contains("sweep")) parse_sweep(doc.at("sweep"), cfg.sweep);
  if (doc.contains("outputs")) {
    std::vector<std::string> names;
    read(doc, "outputs", names, "config");
    if (names.empty()) throw ConfigError("outputs must not be empty");
    cfg.outputs.clear();
    for (const auto& n : names) cfg.outputs.push_back(parse_output(n, "outputs"));
  }
  if (doc.contains("out")) {
    std::string o;
    read(doc, "out", o, "config");
    cfg.out = o;
  }

  try {
    validate_config(cfg.chain);
    if (cfg.detunings) check_sample(cfg.chain, *cfg.detunings);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  // Output locations are not part of the physics, so they stay out of the hash.
  cfg.canonical = doc;
  cfg.canonical.erase("out");
  if (cfg.canonical.contains("sweep")) cfg.canonical["sweep"].erase("checkpoint_dir");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) {
    cfg.mc.seed = *o.seed;
    cfg.manifold.seed = *o.seed;
    cfg.canonical["mc"]["seed"] = *o.seed;
    cfg.canonical["manifold"]["seed"] = *o.seed;
  }
  if (o.realizations) {
    if (*o.realizations < 1) throw ConfigError("--realizations must be >= 1");
    cfg.mc.realizations = *o.realizations;
    cfg.canonical["mc"]["realizations"] = *o.realizations;
  }
  if (o.out) cfg.out = *o.out;
}

}  // namespace wgqed::cli
