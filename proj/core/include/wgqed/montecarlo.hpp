#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "wgqed/model.hpp"
#include "wgqed/pdf_estimate.hpp"

namespace wgqed {

enum class EvaluatorKind { exact, noninteracting };

struct McConfig {
  std::uint64_t realizations = 100000;
  double disorder_std = 1.0;
  std::uint64_t seed = 1;
  Output output = Output::transmission;
  EvaluatorKind evaluator = EvaluatorKind::exact;
  // Sample indices used are [first_index, first_index + realizations).
  std::uint64_t first_index = 0;
};

void validate_mc(const McConfig& mc);

struct PaEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
  std::uint64_t realizations = 0;
  std::uint64_t antibunched = 0;
  std::uint64_t divergent = 0;
  std::uint64_t discarded = 0;
};

PaEstimate pa_from_histogram(const PdfEstimate& pdf);

// Maps one detuning vector to a correlation value. May throw SingularSector,
// which the engine records as a discarded sample.
using SampleEvaluator = std::function<CorrelationValue(std::span<const double>)>;
// Called once per worker to build that worker's private evaluator.
using EvaluatorFactory = std::function<SampleEvaluator()>;

EvaluatorFactory make_evaluator_factory(const ChainConfig& cfg, const McConfig& mc);

// Splits the index range into `threads` contiguous shards, each filling its
// own histogram; shards are merged in order. Counters depend only on
// (seed, index range), never on the thread count.
PdfEstimate run_histogram(const ChainConfig& cfg, const McConfig& mc, const EvaluatorFactory& factory,
                          int threads = 1, LogBinning binning = {});

PaEstimate estimate_pa_probability(const ChainConfig& cfg, const McConfig& mc, int threads = 1);
PdfEstimate estimate_pdf(const ChainConfig& cfg, const McConfig& mc, int threads = 1, LogBinning binning = {});
// Same as estimate_pdf with the evaluator forced to the non-interacting form.
PdfEstimate estimate_pdf_noninteracting(const ChainConfig& cfg, const McConfig& mc, int threads = 1,
                                        LogBinning binning = {});

// Hex digest of a canonical parameter string, stamped into output files.
std::string config_hash(const ChainConfig& cfg, const McConfig& mc);
std::string fnv1a_hex(std::string_view text);

int default_thread_count() noexcept;

}  // namespace wgqed
