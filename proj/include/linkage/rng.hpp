#pragma once

#include <array>
#include <cstdint>

namespace linkage {

/// Philox4x32-10 counter block function. Keyed by a 64-bit seed, indexed by a
/// 128-bit counter; returns four independent 32-bit words per block.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed,
                                        std::uint64_t counter_hi,
                                        std::uint64_t counter_lo);

/// Sequential random stream backed by the Philox block function.
///
/// A stream is addressed by (seed, chunk): distinct chunks are statistically
/// independent and can be consumed in parallel, then merged by chunk index.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t chunk)
      : seed_(seed), chunk_(chunk) {}

  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0, 1).
  double next_uniform();

  /// Standard normal draw via the inverse CDF.
  double next_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t chunk_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;  // empty
};

/// Inverse standard normal CDF, accurate to full double precision
/// (Wichura's PPND16 rational approximations).
double inverse_normal_cdf(double p);

}  // namespace linkage
