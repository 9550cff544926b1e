#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace zenoest {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11). The seed
/// becomes the first key word; every 4 outputs advance a 256-bit counter.
/// Output is identical on every platform, and the counter is incremented
/// before each block, matching numpy.random.Philox.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox4x64(std::uint64_t seed) : key_{seed, 0} {}
  Philox4x64(Key key, Block counter) : key_(key), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) {
      increment();
      buffer_ = encrypt(counter_, key_);
      index_ = 0;
    }
    return buffer_[index_++];
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Ten Philox rounds applied to one counter block.
  static Block encrypt(Block ctr, Key key) {
    constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const auto [hi0, lo0] = mulhilo(kMul0, ctr[0]);
      const auto [hi1, lo1] = mulhilo(kMul1, ctr[2]);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  /// Full 128-bit product of two 64-bit words as (high, low).
  static std::array<std::uint64_t, 2> mulhilo(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t a_lo = a & 0xFFFFFFFFULL;
    const std::uint64_t a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xFFFFFFFFULL;
    const std::uint64_t b_hi = b >> 32;
    const std::uint64_t ll = a_lo * b_lo;
    const std::uint64_t lh = a_lo * b_hi;
    const std::uint64_t hl = a_hi * b_lo;
    const std::uint64_t hh = a_hi * b_hi;
    const std::uint64_t mid = (ll >> 32) + (lh & 0xFFFFFFFFULL) + (hl & 0xFFFFFFFFULL);
    return {hh + (lh >> 32) + (hl >> 32) + (mid >> 32), a * b};
  }

  void increment() {
    for (auto& word : counter_) {
      if (++word != 0) break;
    }
  }

  Key key_;
  Block counter_{0, 0, 0, 0};
  Block buffer_{};
  int index_ = 4;
};

}  // namespace zenoest
