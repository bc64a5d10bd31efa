#include <CLI11.hpp>

#include "commands.hpp"
#include "wgqed/errors.hpp"

namespace wgqed::cli {

int run(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Photon correlations of disordered qubit chains in a waveguide"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides overrides;
  CommandOptions opt;
  std::string out_path, trajectory_path;
  std::uint64_t seed = 0, realizations = 0;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override mc.seed and manifold.seed");
  auto* k_opt = app.add_option("--realizations", realizations, "Override mc.realizations");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_flag("--strict", opt.strict, "Exit with code 3 when a correlation is divergent");

  struct Entry {
    CLI::App* sub;
    int (*fn)(const RunConfig&, const CommandOptions&, Streams);
  };
  std::vector<Entry> entries{
      {app.add_subcommand("eval", "g_T and g_R for one detuning sample"), cmd_eval},
      {app.add_subcommand("sweep", "Grid of disorder statistics, written as CSV"), cmd_sweep},
      {app.add_subcommand("pdf", "Histogram of g over disorder, written as JSON"), cmd_pdf},
      {app.add_subcommand("pa", "Probability of antibunching P(s<1)"), cmd_pa},
      {app.add_subcommand("nppb", "Blockade solution manifold, written as JSONL"), cmd_nppb},
      {app.add_subcommand("timedomain", "Pulsed-drive evolution"), cmd_timedomain},
  };
  CLI::App* td = entries.back().sub;
  td->add_option("--trajectory", trajectory_path, "Write t, |c1_m|, g_T, g_R to this CSV file");
  td->add_option("--stride", opt.stride, "Record every n-th integration step")->check(CLI::PositiveNumber);
  CLI::App* selfcheck = app.add_subcommand("selfcheck", "Oracle checks of the numerical core");
  selfcheck->add_flag("--perturb-phase", opt.perturb_phase, "Negative control: break the phase convention")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, io.out, io.err);
    return rc == 0 ? exit_ok : exit_config;
  }
  opt.threads = std::max(1, opt.threads);
  if (!trajectory_path.empty()) opt.trajectory = trajectory_path;

  try {
    if (selfcheck->parsed()) return cmd_selfcheck(opt, io);
    if (config_path.empty()) throw ConfigError("--config is required");
    RunConfig cfg = load_run_config(config_path);
    if (*seed_opt) overrides.seed = seed;
    if (*k_opt) overrides.realizations = realizations;
    if (*out_opt) overrides.out = out_path;
    apply_overrides(cfg, overrides);
    for (const auto& e : entries)
      if (e.sub->parsed()) return e.fn(cfg, opt, io);
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const Error& e) {
    io.err << to_string(e.code()) << ": " << e.what() << "\n";
    const bool config = e.code() == ErrorCode::invalid_config || e.code() == ErrorCode::step_too_large ||
                        e.code() == ErrorCode::unsupported || e.code() == ErrorCode::parse_error;
    return config ? exit_config : exit_failure;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}

}  // namespace wgqed::cli
