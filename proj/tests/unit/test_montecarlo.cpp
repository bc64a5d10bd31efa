#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgqed/closed_forms.hpp"
#include "wgqed/correlations.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/montecarlo.hpp"

using namespace wgqed;

TEST_CASE("mc config validation") {
  CHECK_NOTHROW(validate_mc(McConfig{}));
  McConfig bad;
  bad.realizations = 0;
  CHECK_THROWS_AS(validate_mc(bad), Error);
  bad = McConfig{};
  bad.disorder_std = 0.0;
  CHECK_THROWS_AS(validate_mc(bad), Error);
}

TEST_CASE("two-qubit reflection antibunching probability is two thirds") {
  McConfig mc;
  mc.realizations = 30000;
  mc.output = Output::reflection;
  for (double w : {0.1, 1.0, 10.0}) {
    mc.disorder_std = w;
    const auto pa = estimate_pa_probability(ChainConfig::symmetric(2, 0.0), mc);
    CHECK(pa.discarded == 0);
    CHECK(std::abs(pa.probability - 2.0 / 3.0) < 4 * pa.standard_error);
    CHECK(pa.standard_error == doctest::Approx(std::sqrt(pa.probability * (1 - pa.probability) / 30000)));
  }
}

TEST_CASE("one and two qubits never antibunch in transmission") {
  McConfig mc;
  mc.realizations = 20000;
  for (int n : {1, 2})
    for (double w : {0.1, 1.0, 10.0}) {
      mc.disorder_std = w;
      const auto pa = estimate_pa_probability(ChainConfig::symmetric(n, 0.37 * n), mc);
      CHECK(pa.antibunched == 0);
      CHECK(pa.probability == 0.0);
    }
}

TEST_CASE("counters are independent of the thread count") {
  McConfig mc;
  mc.realizations = 3001;
  mc.seed = 77;
  const auto cfg = ChainConfig::symmetric(4, 0.3);
  const auto one = estimate_pdf(cfg, mc, 1);
  CHECK(one.total() == 3001);
  for (int threads : {2, 3, 8}) CHECK(estimate_pdf(cfg, mc, threads) == one);
  mc.evaluator = EvaluatorKind::noninteracting;
  const auto ni = estimate_pdf(cfg, mc, 1);
  CHECK(estimate_pdf(cfg, mc, 5) == ni);
  CHECK(estimate_pdf_noninteracting(cfg, mc, 1) == ni);
}

TEST_CASE("merge law over disjoint index ranges") {
  const auto cfg = ChainConfig::symmetric(3, 0.2);
  McConfig mc;
  mc.seed = 5;
  mc.realizations = 1000;
  const auto whole = estimate_pdf(cfg, mc);
  mc.realizations = 400;
  auto first = estimate_pdf(cfg, mc);
  mc.first_index = 400;
  mc.realizations = 600;
  first.merge(estimate_pdf(cfg, mc, 2));
  CHECK(first == whole);
}

TEST_CASE("different seeds give different histograms and both are recorded") {
  const auto cfg = ChainConfig::symmetric(3, 0.2);
  McConfig mc;
  mc.realizations = 500;
  mc.seed = 1;
  auto a = estimate_pdf(cfg, mc);
  mc.seed = 2;
  const auto b = estimate_pdf(cfg, mc);
  CHECK_FALSE(a == b);
  a.merge(b);
  CHECK(a.total() == 1000);
  CHECK(a.seeds == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("standard error is calibrated") {
  const auto cfg = ChainConfig::symmetric(2, 0.0);
  McConfig mc;
  mc.realizations = 10000;
  mc.output = Output::reflection;
  std::vector<double> ps;
  double predicted = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    mc.seed = 1000 + s;
    const auto pa = estimate_pa_probability(cfg, mc);
    ps.push_back(pa.probability);
    predicted += pa.standard_error / 100.0;
  }
  double mean = 0.0;
  for (double p : ps) mean += p / 100.0;
  double var = 0.0;
  for (double p : ps) var += (p - mean) * (p - mean) / 99.0;
  CHECK(std::sqrt(var) == doctest::Approx(predicted).epsilon(0.3));
}

TEST_CASE("singular samples are discarded, not fatal") {
  const auto cfg = ChainConfig::symmetric(2, 0.0);
  McConfig mc;
  mc.realizations = 10;
  EvaluatorFactory factory = [] {
    return SampleEvaluator([](std::span<const double> d) -> CorrelationValue {
      if (d[0] > 0) throw Error(ErrorCode::singular_sector, "test");
      return CorrelationValue::finite(0.5);
    });
  };
  const auto h = run_histogram(cfg, mc, factory, 2);
  CHECK(h.discarded() > 0);
  CHECK(h.total() == 10);
  const auto pa = pa_from_histogram(h);
  CHECK(pa.probability == 1.0);
  CHECK(pa.realizations == 10);
  CHECK(pa.discarded == h.discarded());
}

TEST_CASE("discarded rate stays negligible in a realistic run") {
  McConfig mc;
  mc.realizations = 20000;
  const auto h = estimate_pdf(ChainConfig::symmetric(5, 0.1), mc);
  CHECK(h.discarded() == 0);
}

TEST_CASE("non-interacting transmission does not depend on the phase") {
  McConfig mc;
  mc.realizations = 2000;
  mc.disorder_std = 10.0;
  mc.evaluator = EvaluatorKind::noninteracting;
  const auto a = estimate_pdf(ChainConfig::symmetric(5, 0.0), mc);
  const auto b = estimate_pdf(ChainConfig::symmetric(5, 0.3 * std::numbers::pi), mc);
  CHECK(a == b);
}

TEST_CASE("config hash is stable and sensitive") {
  const auto cfg = ChainConfig::symmetric(3, 0.1);
  McConfig mc;
  const auto h = config_hash(cfg, mc);
  CHECK(h.size() == 16);
  CHECK(h == config_hash(cfg, mc));
  mc.seed = 2;
  CHECK(h != config_hash(cfg, mc));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("two-qubit reflection tail follows the small-s asymptote") {
  // At W = 1 the asymptote puts ~exp(-50) mass below s = 0.01, far beyond any
  // sample size; W = 10 moves the tail into reach.
  McConfig mc;
  mc.realizations = 2000000;
  mc.disorder_std = 10.0;
  mc.output = Output::reflection;
  std::vector<PdfEstimate> runs;
  for (double phi : {0.0, 0.3 * std::numbers::pi}) runs.push_back(estimate_pdf(ChainConfig::symmetric(2, phi), mc));
  for (const auto& h : runs) {
    for (double s : {6e-4, 2e-3, 5e-3, 9e-3}) {
      const int b = h.bin_of(s);
      const double c = h.center(b);
      // Average the asymptote over the bin.
      double expect = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double x = h.lower_edge(b) + (k + 0.5) / 200.0 * h.width(b);
        expect += closed_forms::pdf_asym_gR_n2(x, 10.0) / 200.0;
      }
      INFO("s=", c);
      CHECK(h.density(b) / expect < 1.5);
      CHECK(h.density(b) / expect > 1.0 / 1.5);
    }
  }
  // The tails at both phases agree within counting error.
  for (double s : {6e-4, 2e-3, 5e-3}) {
    const int b = runs[0].bin_of(s);
    const double a = double(runs[0].count(b)), c = double(runs[1].count(b));
    CHECK(std::abs(a - c) < 4.0 * std::sqrt(a + c));
  }
}
