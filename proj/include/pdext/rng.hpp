// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Counter-based RNG (Philox4x32-10) so parallel path sampling is reproducible:
// stream (seed, path) yields the same numbers no matter how work is scheduled.

#pragma once

#include <cmath>
#include <cstdint>
#include <array>

namespace pdext {
namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
  const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  k[0] += 0x9E3779B9u;
  k[1] += 0xBB67AE85u;
}

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) philox_round(c, k);
  return c;
}

}  // namespace detail

// One independent stream per (seed, stream) pair. Blocks are indexed by a
// 64-bit counter, so a stream never repeats in any realistic run.
class philox_stream {
 public:
  philox_stream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  // Uniform double in [0, 1): top 53 bits of a 64-bit word, plus half an ulp
  // so 0 is excluded and log() in box_muller is always finite.
  double uniform() {
    if (idx_ == 2) refill();
    const std::uint64_t w = word64(idx_++);
    return static_cast<double>(w >> 11) * 0x1p-53 + 0x1p-54;
  }

  // Standard normal via Box-Muller. Pairs are consumed eagerly; the spare is
  // kept so sequential and strided consumption see the same sequence.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  void refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32), stream_lo_, stream_hi_};
    block_ = detail::philox4x32(ctr, key_);
    ++counter_;
    idx_ = 0;
  }

  std::uint64_t word64(int i) const {
    return (std::uint64_t{block_[2 * i]} << 32) | block_[2 * i + 1];
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int idx_ = 2;  // forces refill on first use
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pdext
