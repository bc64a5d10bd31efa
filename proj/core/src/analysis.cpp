#include "wgqed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "wgqed/errors.hpp"

namespace wgqed {

std::vector<double> bin_masses(const PdfEstimate& h) {
  const double usable = static_cast<double>(h.total() - h.discarded());
  if (usable <= 0.0) throw Error(ErrorCode::degenerate_data, "empty histogram");
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(h.bins()) + 3);
  for (int i = 0; i < h.bins(); ++i) m.push_back(static_cast<double>(h.count(i)) / usable);
  m.push_back(static_cast<double>(h.underflow()) / usable);
  m.push_back(static_cast<double>(h.overflow()) / usable);
  m.push_back(static_cast<double>(h.divergent()) / usable);
  return m;
}

double hellinger(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::binning_mismatch, "Hellinger distance needs equal mass vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(std::max(p[i], 0.0)) - std::sqrt(std::max(q[i], 0.0));
    acc += d * d;
  }
  return std::min(1.0, 0.5 * acc);
}

double hellinger(const PdfEstimate& p, const PdfEstimate& q) {
  if (!(p.binning() == q.binning())) throw Error(ErrorCode::binning_mismatch, "Hellinger distance needs identical binning");
  return hellinger(bin_masses(p), bin_masses(q));
}

namespace {

double normalized_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const char* sector) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, std::string("fidelity: ") + sector + " sizes differ");
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::zero_state, std::string("fidelity: zero ") + sector + " state");
  return std::min(1.0, std::abs(b.dot(a)) / std::sqrt(na * nb));
}

PowerLawFit fit_logs(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  if (n < 3) throw Error(ErrorCode::degenerate_data, "power-law fit needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::degenerate_data, "power-law fit needs distinct x values");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace

FidelityPair fidelity_pair(const TruncatedSteadyState& exact, const TruncatedSteadyState& approx) {
  FidelityPair f;
  f.single = normalized_overlap(exact.psi1, approx.psi1, "single-excitation");
  f.pair = normalized_overlap(exact.psi2, approx.psi2, "two-excitation");
  return f;
}

PowerLawFit powerlaw_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::dimension_mismatch, "power-law fit: xs and ys differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw Error(ErrorCode::degenerate_data, "power-law fit needs positive data");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return fit_logs(lx, ly);
}

PowerLawFit saturating_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::dimension_mismatch, "saturating fit: xs and ys differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] < 1.0)) continue;
    if (!(xs[i] > 0.0)) throw Error(ErrorCode::degenerate_data, "saturating fit needs positive x");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(1.0 - ys[i]));
  }
  auto f = fit_logs(lx, ly);
  f.exponent = -f.exponent;
  return f;
}

std::size_t SweepGrid::expected_cells() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return axes.empty() ? 0 : n;
}

double SweepGrid::coordinate(const SweepCell& cell, std::size_t axis) const {
  return axes.at(axis).values.at(cell.index.at(axis));
}

int SweepGrid::axis_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (axes[i].name == name) return static_cast<int>(i);
  return -1;
}

GridArgmax grid_argmax(const SweepGrid& grid) {
  if (grid.cells.empty()) throw Error(ErrorCode::degenerate_data, "argmax of an empty grid");
  const int phase_axis = grid.axis_index("phase");
  const int w_axis = grid.axis_index("W");
  auto key = [&](const SweepCell& c, int axis) {
    return axis < 0 ? 0.0 : grid.coordinate(c, static_cast<std::size_t>(axis));
  };
  const SweepCell* best = &grid.cells.front();
  for (const auto& c : grid.cells) {
    if (std::isnan(c.value)) continue;
    if (std::isnan(best->value) || c.value > best->value) {
      best = &c;
    } else if (c.value == best->value) {
      const double cp = key(c, phase_axis), bp = key(*best, phase_axis);
      if (cp < bp || (cp == bp && key(c, w_axis) < key(*best, w_axis))) best = &c;
    }
  }
  GridArgmax out;
  out.index = best->index;
  out.value = best->value;
  for (std::size_t a = 0; a < grid.axes.size(); ++a) out.coordinates.push_back(grid.coordinate(*best, a));
  return out;
}

void write_grid_csv(std::ostream& os, const SweepGrid& grid) {
  os << "# config_hash=" << grid.config_hash << "\n";
  os << "# quantity=" << grid.quantity << "\n";
  for (const auto& a : grid.axes) os << a.name << ",";
  os << "value,stderr,K,seed\n";
  os << std::setprecision(12);
  for (const auto& c : grid.cells) {
    for (std::size_t a = 0; a < grid.axes.size(); ++a) os << grid.coordinate(c, a) << ",";
    os << c.value << "," << c.std_error << "," << c.realizations << "," << c.seed << "\n";
  }
}

SweepGrid read_grid_csv(std::istream& is) {
  SweepGrid grid;
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> meta;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config_hash=", 0) == 0) {
      grid.config_hash = line.substr(14);
      continue;
    }
    if (line.rfind("# quantity=", 0) == 0) {
      grid.quantity = line.substr(11);
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (header.empty()) {
      header = fields;
      if (header.size() < 4 || header[header.size() - 4] != "value")
        throw Error(ErrorCode::parse_error, "grid CSV header must end with value,stderr,K,seed");
      continue;
    }
    if (fields.size() != header.size()) throw Error(ErrorCode::parse_error, "grid CSV row has wrong field count");
    std::vector<double> r;
    for (std::size_t i = 0; i + 2 < fields.size(); ++i) r.push_back(std::stod(fields[i]));
    rows.push_back(std::move(r));
    meta.emplace_back(std::stoull(fields[fields.size() - 2]), std::stoull(fields.back()));
  }
  const std::size_t n_axes = header.size() >= 4 ? header.size() - 4 : 0;
  for (std::size_t a = 0; a < n_axes; ++a) {
    SweepAxis axis{header[a], {}};
    for (const auto& r : rows)
      if (std::find(axis.values.begin(), axis.values.end(), r[a]) == axis.values.end()) axis.values.push_back(r[a]);
    grid.axes.push_back(std::move(axis));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SweepCell c;
    for (std::size_t a = 0; a < n_axes; ++a) {
      const auto& vals = grid.axes[a].values;
      c.index.push_back(static_cast<std::size_t>(std::find(vals.begin(), vals.end(), rows[i][a]) - vals.begin()));
    }
    c.value = rows[i][n_axes];
    c.std_error = rows[i][n_axes + 1];
    c.realizations = meta[i].first;
    c.seed = meta[i].second;
    grid.cells.push_back(std::move(c));
  }
  return grid;
}

}  // namespace wgqed
