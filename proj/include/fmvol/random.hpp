#pragma once

#include <array>
#include <cstdint>

namespace fmvol {

/// Philox4x32-10 block: a keyed bijection on 128-bit counters (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Standard normal quantile, Wichura's AS241 (PPND16); about 1e-16 relative accuracy.
double normal_quantile(double p) noexcept;

/// Reproducible stream of standard normals addressed by index.
///
/// Draw i is Phi^{-1}(u) where u is a 53-bit uniform built from
/// Philox4x32-10 applied to the counter (i, stream) under the key `seed`.
/// Any draw can be regenerated independently of the others, so results do not
/// depend on how work is chunked across threads. The algorithm is frozen: changing
/// it changes every seeded path in the test fixtures.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  double uniform(std::uint64_t index) const noexcept;
  double operator()(std::uint64_t index) const noexcept { return normal_quantile(uniform(index)); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace fmvol
