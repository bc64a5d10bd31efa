#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

struct LogBinning {
  int min_decade = -12;
  int max_decade = 12;
  int per_decade = 20;

  int bins() const noexcept { return (max_decade - min_decade) * per_decade; }
  friend bool operator==(const LogBinning&, const LogBinning&) = default;
};

// Log-binned histogram of correlation values with explicit tail counters.
// Every recorded sample lands in exactly one of: a bin, underflow (s below the
// first edge, including s = 0), overflow, divergent, discarded.
class PdfEstimate {
 public:
  explicit PdfEstimate(LogBinning binning = {});

  const LogBinning& binning() const noexcept { return binning_; }
  int bins() const noexcept { return binning_.bins(); }
  const std::vector<double>& edges() const noexcept { return edges_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  double lower_edge(int bin) const { return edges_[static_cast<std::size_t>(bin)]; }
  double upper_edge(int bin) const { return edges_[static_cast<std::size_t>(bin) + 1]; }
  double width(int bin) const { return upper_edge(bin) - lower_edge(bin); }
  // Geometric bin centre.
  double center(int bin) const;

  // -1 for underflow, bins() for overflow.
  int bin_of(double s) const noexcept;
  // Index of the edge equal to s, or -1.
  int edge_index(double s) const noexcept;

  void add(const CorrelationValue& g) noexcept;
  void add_value(double s) noexcept;
  void add_discarded(std::uint64_t n = 1) noexcept { discarded_ += n; }

  // Counter addition; throws BinningMismatch.
  void merge(const PdfEstimate& other);

  std::uint64_t total() const noexcept;
  std::uint64_t underflow() const noexcept { return underflow_; }
  std::uint64_t overflow() const noexcept { return overflow_; }
  std::uint64_t divergent() const noexcept { return divergent_; }
  std::uint64_t discarded() const noexcept { return discarded_; }
  std::uint64_t count(int bin) const { return counts_[static_cast<std::size_t>(bin)]; }

  // count / (K * width), K = all samples.
  double density(int bin) const;
  // Density of the bin containing s; 0 outside the binned range.
  double density_at(double s) const;
  // Fraction of usable samples (K - discarded) with g < 1. Exact: 1 is a bin edge.
  double antibunching_probability() const;
  // Samples with g strictly below an edge value (edge must be a bin edge or
  // outside the range).
  std::uint64_t count_below_edge(int edge) const;

  // Provenance carried through merges.
  std::vector<std::uint64_t> seeds;
  std::string config_hash;

  std::string to_json() const;
  static PdfEstimate from_json(std::string_view text);

  friend bool operator==(const PdfEstimate& a, const PdfEstimate& b) {
    return a.binning_ == b.binning_ && a.counts_ == b.counts_ && a.underflow_ == b.underflow_ &&
           a.overflow_ == b.overflow_ && a.divergent_ == b.divergent_ && a.discarded_ == b.discarded_;
  }

 private:
  LogBinning binning_;
  std::vector<double> edges_;
  std::vector<double> log_edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t underflow_ = 0;
  std::uint64_t overflow_ = 0;
  std::uint64_t divergent_ = 0;
  std::uint64_t discarded_ = 0;
};

}  // namespace wgqed
