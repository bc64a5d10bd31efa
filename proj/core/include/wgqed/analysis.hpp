#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wgqed/correlations.hpp"
#include "wgqed/pdf_estimate.hpp"

namespace wgqed {

// 1/2 sum (sqrt(p_i) - sqrt(q_i))^2 over discrete masses: every bin plus the
// underflow, overflow and divergent counters, normalised by the usable count.
// Throws BinningMismatch.
double hellinger(const PdfEstimate& p, const PdfEstimate& q);
// Same distance over two probability mass vectors of equal length.
double hellinger(std::span<const double> p, std::span<const double> q);
// Masses in the order used by hellinger: bins, underflow, overflow, divergent.
// Throws DegenerateData for an empty histogram.
std::vector<double> bin_masses(const PdfEstimate& h);

struct FidelityPair {
  double single = 0.0;  // F1
  double pair = 0.0;    // F2
};

// |<approx|exact>| / sqrt(<approx|approx><exact|exact>) in each sector.
// Throws ZeroState when a norm vanishes, DimensionMismatch on size mismatch.
FidelityPair fidelity_pair(const TruncatedSteadyState& exact, const TruncatedSteadyState& approx);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// y = prefactor * x^exponent by least squares on (log x, log y).
// Throws DegenerateData for fewer than 3 points or non-positive data.
PowerLawFit powerlaw_fit(std::span<const double> xs, std::span<const double> ys);
// y = 1 - prefactor * x^(-exponent), fitted on (log x, log(1 - y)); points
// with y >= 1 are dropped. The returned exponent is b in x^(-b).
PowerLawFit saturating_fit(std::span<const double> xs, std::span<const double> ys);

struct SweepAxis {
  std::string name;  // "N", "phase", "W", "gamma_nw", "chirality"
  std::vector<double> values;
};

struct SweepCell {
  std::vector<std::size_t> index;  // one entry per axis
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t realizations = 0;
  std::uint64_t seed = 0;
};

// Rectangular grid of scalar results; cells are stored in row-major order of
// the axes (last axis fastest).
struct SweepGrid {
  std::vector<SweepAxis> axes;
  std::string quantity;
  std::vector<SweepCell> cells;
  std::string config_hash;

  std::size_t expected_cells() const noexcept;
  double coordinate(const SweepCell& cell, std::size_t axis) const;
  int axis_index(std::string_view name) const noexcept;
};

struct GridArgmax {
  std::vector<std::size_t> index;
  std::vector<double> coordinates;
  double value = 0.0;
};

// Largest cell value. Ties go to the smaller phase, then the smaller W, then
// the earlier cell. Throws DegenerateData on an empty grid.
GridArgmax grid_argmax(const SweepGrid& grid);

// CSV with a "# config_hash=..." header line, columns: axes..., value, stderr, K, seed.
void write_grid_csv(std::ostream& os, const SweepGrid& grid);
SweepGrid read_grid_csv(std::istream& is);

}  // namespace wgqed
