#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wgqed {

// Static chain parameters. Rates share one arbitrary unit; the main-text
// convention is gamma_t = gamma_r = 0.5, gamma_nw = 0 (total waveguide rate 1).
struct ChainConfig {
  int n_qubits = 1;
  double phase = 0.0;
  double gamma_t = 0.5;
  double gamma_r = 0.5;
  double gamma_nw = 0.0;

  double waveguide_decay() const noexcept { return gamma_t + gamma_r; }
  double total_decay() const noexcept { return gamma_t + gamma_r + gamma_nw; }
  // beta = waveguide / total decay
  double coupling_efficiency() const noexcept { return waveguide_decay() / total_decay(); }
  // alpha = gamma_r / gamma_t; infinite for a purely backward-coupled chain
  double chirality_ratio() const noexcept {
    return gamma_t > 0.0 ? gamma_r / gamma_t : std::numeric_limits<double>::infinity();
  }
  // phase reduced to [0, 2pi); reporting only, computations use `phase`
  double reduced_phase() const noexcept;

  static ChainConfig symmetric(int n, double phase, double gamma_nw = 0.0) {
    return ChainConfig{n, phase, 0.5, 0.5, gamma_nw};
  }

  friend bool operator==(const ChainConfig&, const ChainConfig&) = default;
};

// Throws Error(invalid_config) naming the first violated field.
void validate_config(const ChainConfig& cfg);

// One disorder realization: detunings of each qubit from the common frequency.
struct DisorderSample {
  std::vector<double> detunings;

  static DisorderSample zeros(int n) { return {std::vector<double>(static_cast<std::size_t>(n), 0.0)}; }
  std::size_t size() const noexcept { return detunings.size(); }
  std::span<const double> view() const noexcept { return detunings; }
};

void check_sample(const ChainConfig& cfg, std::span<const double> detunings);

// Flat index for the doubly excited basis state (m, n), 1 <= n < m <= N,
// ordered (2,1), (3,1), (3,2), (4,1), ...
constexpr std::size_t pair_flat(int m, int n) noexcept {
  return static_cast<std::size_t>((m - 1) * (m - 2) / 2 + (n - 1));
}

constexpr std::size_t pair_count(int n_qubits) noexcept {
  return n_qubits < 2 ? 0 : static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2;
}

class PairIndex {
 public:
  explicit PairIndex(int n_qubits);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return pairs_.size(); }

  // Throws Error(index_out_of_range) unless 1 <= n < m <= N.
  std::size_t index(int m, int n) const;
  std::pair<int, int> unindex(std::size_t k) const;

  const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

// A correlation value: finite and >= 0, or divergent (zero single-photon amplitude).
class CorrelationValue {
 public:
  static CorrelationValue finite(double g);
  static CorrelationValue divergent() noexcept { return CorrelationValue(); }

  bool is_divergent() const noexcept { return divergent_; }
  bool is_finite() const noexcept { return !divergent_; }
  // +inf when divergent
  double value() const noexcept {
    return divergent_ ? std::numeric_limits<double>::infinity() : value_;
  }
  bool antibunched() const noexcept { return !divergent_ && value_ < 1.0; }

  std::string to_string(int precision = 12) const;

  friend bool operator==(const CorrelationValue&, const CorrelationValue&) = default;

 private:
  CorrelationValue() = default;
  double value_ = 0.0;
  bool divergent_ = true;
};

enum class Output { transmission, reflection };

std::string_view to_string(Output out) noexcept;
Output output_from_string(std::string_view s);

}  // namespace wgqed
