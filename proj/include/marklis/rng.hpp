#pragma once

// Counter-based random numbers. Every consumer derives its engine from a
// (seed, stream, tag) triple, so trial t of an experiment sees the same
// numbers no matter which thread runs it or in which order.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace marklis {

/// Philox4x64-10 (Salmon et al., SC'11). The key is (seed, tag); the 256-bit
/// counter is (block, stream, 0, 0).
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  Philox4x64(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag = 0) noexcept
      : key_{seed, tag}, counter_{0, stream, 0, 0} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) {
      buffer_ = bijection(counter_, key_);
      ++counter_[0];
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// The raw keyed bijection, exposed for known-answer tests.
  // 64x64 -> 128-bit products; a GCC/Clang extension.
  __extension__ using U128 = unsigned __int128;

  static constexpr Block bijection(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const U128 p0 = static_cast<U128>(kMul0) * ctr[0];
      const U128 p1 = static_cast<U128>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const auto lo0 = static_cast<std::uint64_t>(p0);
      const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const auto lo1 = static_cast<std::uint64_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  Key key_;
  Block counter_;
  Block buffer_{};
  int pos_ = 4;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Philox4x64& eng) noexcept {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1), safe to pass to log().
inline double uniform_open01(Philox4x64& eng) noexcept {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal deviates by the Marsaglia polar method. Holds the spare
/// deviate, so one sampler belongs to one engine.
class NormalSampler {
 public:
  double operator()(Philox4x64& eng) noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01(eng) - 1.0;
      v = 2.0 * uniform01(eng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Domain tags separating the streams of unrelated consumers of one seed.
namespace stream_tag {
inline constexpr std::uint64_t kWord = 0x776f7264;          // "word"
inline constexpr std::uint64_t kBrownian = 0x62726f776e;    // "brown"
inline constexpr std::uint64_t kGue = 0x677565;             // "gue"
inline constexpr std::uint64_t kLiLaw = 0x6c696c6177;       // "lilaw"
inline constexpr std::uint64_t kShape = 0x7368617065;       // "shape"
inline constexpr std::uint64_t kMoment = 0x6d6f6d656e74;    // "moment"
inline constexpr std::uint64_t kDrift = 0x6472696674;       // "drift"
}  // namespace stream_tag

}  // namespace marklis
