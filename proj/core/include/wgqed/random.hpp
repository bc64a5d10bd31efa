#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace wgqed {

// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the output
// depends only on (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr int rounds = 10;

  static Counter block(Counter ctr, Key key) noexcept;
};

// Random stream for one Monte Carlo sample. Word j of the stream is word
// j % 4 of block(counter = {index lo, index hi, j / 4, 0}, key = seed), so
// sample `index` sees the same numbers under any scheduling.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept;
  // Standard normal by inversion of a single uniform.
  double normal() noexcept;

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buf_{};
  int pos_ = 4;
};

// Inverse of the standard normal CDF, Wichura's AS 241 (PPND16); about 1e-16
// relative accuracy on (0, 1). Returns -inf/+inf at 0 and 1.
double normal_quantile(double p) noexcept;

// Detunings of sample `index`: independent N(0, std^2) draws.
void draw_detunings(std::uint64_t seed, std::uint64_t index, double std_dev, std::span<double> out) noexcept;

}  // namespace wgqed
