#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>

#include "run_config.hpp"

namespace wgqed::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_divergent = 3,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct CommandOptions {
  int threads = 1;
  bool strict = false;
  // timedomain
  std::optional<std::filesystem::path> trajectory;
  std::size_t stride = 100;
  // selfcheck negative control: evaluate the matrix path with phase 2*phi.
  bool perturb_phase = false;
};

int cmd_eval(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_pa(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_pdf(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_nppb(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_timedomain(const RunConfig& cfg, const CommandOptions& opt, Streams io);
int cmd_selfcheck(const CommandOptions& opt, Streams io);

// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, Streams io);

}  // namespace wgqed::cli
