#pragma once

#include <array>
#include <cstdint>

namespace ecf {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by (seed, stream index); the n-th block of the
/// stream is a pure function of (seed, stream, n), so replicates can be
/// generated in any order or on any thread and still agree bit for bit.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// The 128-bit output for block `index`.
  Block block(std::uint64_t index) const noexcept {
    Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

/// Sequential view of one Philox stream yielding doubles in (0,1).
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) noexcept : gen_(seed, stream) {}

  /// 53-bit uniform strictly inside (0,1): (m + 0.5) * 2^-53.
  double next() noexcept {
    if (slot_ == 2) {
      buf_ = gen_.block(counter_++);
      slot_ = 0;
    }
    const std::uint64_t hi = buf_[2 * slot_ + 1];
    const std::uint64_t lo = buf_[2 * slot_];
    ++slot_;
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  Philox4x32 gen_;
  Philox4x32::Block buf_{};
  std::uint64_t counter_ = 0;
  int slot_ = 2;
};

}  // namespace ecf
