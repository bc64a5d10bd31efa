#include "wgqed/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wgqed/errors.hpp"

namespace wgqed {

double ChainConfig::reduced_phase() const noexcept {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phase, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

void validate_config(const ChainConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_config, msg); };
  if (cfg.n_qubits < 1) fail("n_qubits must be >= 1");
  if (!std::isfinite(cfg.phase)) fail("phase must be finite");
  if (!(cfg.gamma_t >= 0.0) || !std::isfinite(cfg.gamma_t)) fail("gamma_t must be finite and >= 0");
  if (!(cfg.gamma_r >= 0.0) || !std::isfinite(cfg.gamma_r)) fail("gamma_r must be finite and >= 0");
  if (!(cfg.gamma_nw >= 0.0) || !std::isfinite(cfg.gamma_nw)) fail("gamma_nw must be finite and >= 0");
  if (!(cfg.gamma_t + cfg.gamma_r > 0.0)) fail("gamma_t + gamma_r must be > 0 (chain decoupled from waveguide)");
}

void check_sample(const ChainConfig& cfg, std::span<const double> detunings) {
  if (detunings.size() != static_cast<std::size_t>(cfg.n_qubits)) {
    throw Error(ErrorCode::dimension_mismatch,
                "sample has " + std::to_string(detunings.size()) + " detunings, chain has " +
                    std::to_string(cfg.n_qubits) + " qubits");
  }
}

PairIndex::PairIndex(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0) throw Error(ErrorCode::index_out_of_range, "negative chain size");
  pairs_.reserve(pair_count(n_qubits));
  for (int m = 2; m <= n_qubits; ++m)
    for (int n = 1; n < m; ++n) pairs_.emplace_back(m, n);
}

std::size_t PairIndex::index(int m, int n) const {
  if (!(1 <= n && n < m && m <= n_)) {
    throw Error(ErrorCode::index_out_of_range,
                "pair (" + std::to_string(m) + "," + std::to_string(n) + ") invalid for N=" + std::to_string(n_));
  }
  return pair_flat(m, n);
}

std::pair<int, int> PairIndex::unindex(std::size_t k) const {
  if (k >= pairs_.size()) {
    throw Error(ErrorCode::index_out_of_range, "flat pair index " + std::to_string(k) + " out of range");
  }
  return pairs_[k];
}

CorrelationValue CorrelationValue::finite(double g) {
  CorrelationValue v;
  v.divergent_ = false;
  v.value_ = g < 0.0 ? 0.0 : g;
  return v;
}

std::string CorrelationValue::to_string(int precision) const {
  if (divergent_) return "divergent";
  std::ostringstream os;
  os.precision(precision);
  os << value_;
  return os.str();
}

std::string_view to_string(Output out) noexcept {
  return out == Output::transmission ? "transmission" : "reflection";
}

Output output_from_string(std::string_view s) {
  if (s == "transmission" || s == "T" || s == "t") return Output::transmission;
  if (s == "reflection" || s == "R" || s == "r") return Output::reflection;
  throw Error(ErrorCode::invalid_config, "unknown output '" + std::string(s) + "'");
}

}  // namespace wgqed
