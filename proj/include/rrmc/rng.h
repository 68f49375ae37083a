#pragma once

#include <array>
#include <cstdint>

namespace rrmc {

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// SplitMix64 finalizer, used to derive independent keys from a seed and tags.
std::uint64_t mix64(std::uint64_t x);

/// Key for a named substream domain: mix(seed, tag...).
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b);

/// Inverse of the standard normal CDF (Wichura, AS241; ~1e-16 relative).
/// p must lie in the open interval (0, 1).
double inverse_normal_cdf(double p);

double normal_cdf(double x);

/// Counter-based stream: the n-th draw depends only on (key, stream, n), so a
/// path's variates are independent of how paths are scheduled across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream);

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();
  /// Standard normal via inverse CDF.
  double normal() { return inverse_normal_cdf(uniform()); }

  std::uint64_t draws() const { return draw_; }

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint64_t draw_ = 0;
  PhiloxCounter buffer_{};
  int buffered_ = 0;
};

}  // namespace rrmc
