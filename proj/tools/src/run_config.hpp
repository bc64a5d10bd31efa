#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgqed/model.hpp"
#include "wgqed/montecarlo.hpp"
#include "wgqed/nppb.hpp"
#include "wgqed/pdf_estimate.hpp"
#include "wgqed/timedomain.hpp"

namespace wgqed::cli {

// Malformed or inconsistent run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepQuantity { pa_probability, density, g_clean };

struct SweepAxisSpec {
  std::string name;  // N, phase, phase_pi, W, gamma_nw, chirality
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxisSpec> axes;
  SweepQuantity quantity = SweepQuantity::pa_probability;
  double s0 = 1e-3;  // density quantity reads the bin containing s0
  std::optional<std::filesystem::path> checkpoint_dir;
};

struct RunConfig {
  ChainConfig chain;
  std::optional<std::vector<double>> detunings;
  McConfig mc;
  LogBinning binning;
  PulseConfig pulse;
  ManifoldRun manifold;
  SweepSpec sweep;
  std::vector<Output> outputs{Output::transmission, Output::reflection};
  std::optional<std::filesystem::path> out;

  // Canonical JSON of the effective configuration, overrides applied.
  nlohmann::json canonical;

  std::string hash() const;
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> realizations;
  std::optional<std::filesystem::path> out;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

}  // namespace wgqed::cli
