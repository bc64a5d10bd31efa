#include "wgqed/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>
#include <vector>

#include "wgqed/correlations.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/random.hpp"

namespace wgqed {

void validate_mc(const McConfig& mc) {
  if (mc.realizations < 1) throw Error(ErrorCode::invalid_config, "realizations must be >= 1");
  if (!(mc.disorder_std > 0.0) || !std::isfinite(mc.disorder_std))
    throw Error(ErrorCode::invalid_config, "disorder_std must be finite and > 0");
}

PaEstimate pa_from_histogram(const PdfEstimate& pdf) {
  PaEstimate out;
  out.discarded = pdf.discarded();
  out.divergent = pdf.divergent();
  out.realizations = pdf.total();
  const auto usable = out.realizations - out.discarded;
  out.antibunched = pdf.count_below_edge(pdf.edge_index(1.0));
  if (usable > 0) {
    out.probability = static_cast<double>(out.antibunched) / static_cast<double>(usable);
    out.standard_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(usable));
  }
  return out;
}

EvaluatorFactory make_evaluator_factory(const ChainConfig& cfg, const McConfig& mc) {
  validate_config(cfg);
  const Output out = mc.output;
  if (out == Output::reflection && cfg.gamma_r == 0.0)
    throw Error(ErrorCode::unsupported, "reflection output needs gamma_r > 0");
  if (mc.evaluator == EvaluatorKind::noninteracting) {
    return [cfg, out]() -> SampleEvaluator {
      auto eval = std::make_shared<NonInteractingEvaluator>(cfg);
      return [eval, out](std::span<const double> d) { return eval->evaluate(d, out); };
    };
  }
  return [cfg, out]() -> SampleEvaluator {
    auto eval = std::make_shared<CorrelationEvaluator>(cfg);
    return [eval, out](std::span<const double> d) { return eval->evaluate(d, out); };
  };
}

namespace {

void run_shard(const ChainConfig& cfg, const McConfig& mc, const EvaluatorFactory& factory, std::uint64_t begin,
               std::uint64_t end, PdfEstimate& hist) {
  const SampleEvaluator eval = factory();
  std::vector<double> detunings(static_cast<std::size_t>(cfg.n_qubits));
  for (std::uint64_t i = begin; i < end; ++i) {
    draw_detunings(mc.seed, i, mc.disorder_std, detunings);
    try {
      hist.add(eval(detunings));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_sector) throw;
      hist.add_discarded();
    }
  }
}

}  // namespace

PdfEstimate run_histogram(const ChainConfig& cfg, const McConfig& mc, const EvaluatorFactory& factory, int threads,
                          LogBinning binning) {
  validate_config(cfg);
  validate_mc(mc);
  const std::uint64_t k = mc.realizations;
  const auto shards = static_cast<std::uint64_t>(std::max(1, threads));
  const std::uint64_t used = std::min<std::uint64_t>(shards, k);

  std::vector<PdfEstimate> parts(used, PdfEstimate(binning));
  std::vector<std::exception_ptr> errors(used);
  auto bounds = [&](std::uint64_t s) { return mc.first_index + k * s / used; };

  if (used == 1) {
    run_shard(cfg, mc, factory, bounds(0), bounds(1), parts[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (std::uint64_t s = 0; s < used; ++s) {
      pool.emplace_back([&, s] {
        try {
          run_shard(cfg, mc, factory, bounds(s), bounds(s + 1), parts[s]);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  PdfEstimate out(binning);
  for (auto& p : parts) out.merge(p);
  out.seeds = {mc.seed};
  out.config_hash = config_hash(cfg, mc);
  return out;
}

PaEstimate estimate_pa_probability(const ChainConfig& cfg, const McConfig& mc, int threads) {
  return pa_from_histogram(estimate_pdf(cfg, mc, threads));
}

PdfEstimate estimate_pdf(const ChainConfig& cfg, const McConfig& mc, int threads, LogBinning binning) {
  return run_histogram(cfg, mc, make_evaluator_factory(cfg, mc), threads, binning);
}

PdfEstimate estimate_pdf_noninteracting(const ChainConfig& cfg, const McConfig& mc, int threads, LogBinning binning) {
  McConfig m = mc;
  m.evaluator = EvaluatorKind::noninteracting;
  return estimate_pdf(cfg, m, threads, binning);
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ChainConfig& cfg, const McConfig& mc) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "N=%d;phi=%.17g;gt=%.17g;gr=%.17g;gnw=%.17g;K=%llu;W=%.17g;seed=%llu;out=%d;eval=%d",
                cfg.n_qubits, cfg.phase, cfg.gamma_t, cfg.gamma_r, cfg.gamma_nw,
                static_cast<unsigned long long>(mc.realizations), mc.disorder_std,
                static_cast<unsigned long long>(mc.seed), static_cast<int>(mc.output), static_cast<int>(mc.evaluator));
  return fnv1a_hex(buf);
}

int default_thread_count() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace wgqed
