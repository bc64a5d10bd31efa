#include "wgqed/pdf_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "wgqed/errors.hpp"

namespace wgqed {

PdfEstimate::PdfEstimate(LogBinning binning) : binning_(binning) {
  if (binning.per_decade < 1 || binning.max_decade <= binning.min_decade)
    throw Error(ErrorCode::invalid_config, "histogram binning needs per_decade >= 1 and max_decade > min_decade");
  const int n = binning.bins();
  edges_.resize(static_cast<std::size_t>(n) + 1);
  const int offset = binning.min_decade * binning.per_decade;
  // Integer numerators keep decade edges (in particular 1.0) exact.
  for (int k = 0; k <= n; ++k)
    edges_[static_cast<std::size_t>(k)] = std::pow(10.0, static_cast<double>(k + offset) / binning.per_decade);
  counts_.assign(static_cast<std::size_t>(n), 0);
}

double PdfEstimate::center(int bin) const { return std::sqrt(lower_edge(bin) * upper_edge(bin)); }

int PdfEstimate::bin_of(double s) const noexcept {
  const int n = bins();
  if (!(s >= edges_.front())) return -1;
  if (s >= edges_.back()) return n;
  int k = static_cast<int>(std::floor((std::log10(s) - binning_.min_decade) * binning_.per_decade));
  k = std::clamp(k, 0, n - 1);
  while (k > 0 && s < edges_[static_cast<std::size_t>(k)]) --k;
  while (k < n - 1 && s >= edges_[static_cast<std::size_t>(k) + 1]) ++k;
  return k;
}

int PdfEstimate::edge_index(double s) const noexcept {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), s);
  if (it == edges_.end() || *it != s) return -1;
  return static_cast<int>(it - edges_.begin());
}

void PdfEstimate::add(const CorrelationValue& g) noexcept {
  if (g.is_divergent())
    ++divergent_;
  else
    add_value(g.value());
}

void PdfEstimate::add_value(double s) noexcept {
  if (std::isnan(s)) {
    ++discarded_;
    return;
  }
  const int k = bin_of(s);
  if (k < 0)
    ++underflow_;
  else if (k >= bins())
    ++overflow_;
  else
    ++counts_[static_cast<std::size_t>(k)];
}

void PdfEstimate::merge(const PdfEstimate& other) {
  if (!(binning_ == other.binning_)) throw Error(ErrorCode::binning_mismatch, "cannot merge histograms with different binning");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
  divergent_ += other.divergent_;
  discarded_ += other.discarded_;
  for (auto s : other.seeds)
    if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) seeds.push_back(s);
  if (config_hash.empty()) config_hash = other.config_hash;
}

std::uint64_t PdfEstimate::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}) + underflow_ + overflow_ + divergent_ +
         discarded_;
}

double PdfEstimate::density(int bin) const {
  const auto k = total();
  if (k == 0) return 0.0;
  return static_cast<double>(count(bin)) / (static_cast<double>(k) * width(bin));
}

double PdfEstimate::density_at(double s) const {
  const int k = bin_of(s);
  if (k < 0 || k >= bins()) return 0.0;
  return density(k);
}

std::uint64_t PdfEstimate::count_below_edge(int edge) const {
  if (edge <= 0) return underflow_;
  const int upto = std::min(edge, bins());
  std::uint64_t c = underflow_;
  for (int i = 0; i < upto; ++i) c += counts_[static_cast<std::size_t>(i)];
  if (edge > bins()) c += overflow_;
  return c;
}

double PdfEstimate::antibunching_probability() const {
  const auto usable = total() - discarded_;
  if (usable == 0) return 0.0;
  const int one = edge_index(1.0);
  if (one < 0) throw Error(ErrorCode::unsupported, "binning range must contain s = 1 as an edge");
  const std::uint64_t below = count_below_edge(one);
  return static_cast<double>(below) / static_cast<double>(usable);
}

std::string PdfEstimate::to_json() const {
  nlohmann::json j;
  j["binning"] = {{"min_decade", binning_.min_decade},
                  {"max_decade", binning_.max_decade},
                  {"per_decade", binning_.per_decade}};
  j["edges"] = edges_;
  j["counts"] = counts_;
  j["underflow"] = underflow_;
  j["overflow"] = overflow_;
  j["divergent"] = divergent_;
  j["discarded"] = discarded_;
  j["K"] = total();
  j["seed"] = seeds;
  j["config_hash"] = config_hash;
  return j.dump();
}

PdfEstimate PdfEstimate::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    LogBinning b;
    b.min_decade = j.at("binning").at("min_decade").get<int>();
    b.max_decade = j.at("binning").at("max_decade").get<int>();
    b.per_decade = j.at("binning").at("per_decade").get<int>();
    PdfEstimate p(b);
    auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    if (counts.size() != p.counts_.size()) throw Error(ErrorCode::parse_error, "histogram counts length mismatch");
    p.counts_ = std::move(counts);
    p.underflow_ = j.at("underflow").get<std::uint64_t>();
    p.overflow_ = j.at("overflow").get<std::uint64_t>();
    p.divergent_ = j.at("divergent").get<std::uint64_t>();
    p.discarded_ = j.at("discarded").get<std::uint64_t>();
    p.seeds = j.at("seed").get<std::vector<std::uint64_t>>();
    p.config_hash = j.at("config_hash").get<std::string>();
    if (j.contains("K") && j.at("K").get<std::uint64_t>() != p.total())
      throw Error(ErrorCode::parse_error, "histogram K does not equal the sum of its counters");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

}  // namespace wgqed
