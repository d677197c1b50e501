#pragma once

#include <cmath>
#include <cstdint>

namespace scmpc {

// Counter-based random streams. Every draw is a pure function of
// (stream key, counter), so a stream can be split into substreams and
// consumed from several threads without shared state. Substream derivation
// and the per-counter output both run the SplitMix64 finalizer, which keys
// far apart in (seed, id, counter) space to uncorrelated outputs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kRootSalt)) {}

  // Derived stream for a child id (time step, scenario index, stage, ...).
  // Children of distinct ids, and children of distinct parents, do not
  // overlap; the outer mix keeps derivation order-sensitive.
  [[nodiscard]] RngStream substream(std::uint64_t id) const {
    return RngStream(mix(key_ + mix(id + kGolden)), RawTag{});
  }

  // 64 uniform bits at a counter position.
  [[nodiscard]] std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * kGolden);
  }

  // Uniform double in [0, 1), 53-bit resolution.
  [[nodiscard]] double uniform01(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as a log() argument.
  [[nodiscard]] double uniform01_open_below(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }

 private:
  struct RawTag {};
  RngStream(std::uint64_t raw_key, RawTag) : key_(raw_key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kRootSalt = 0x5C4A61B5u;

  std::uint64_t key_;
};

// Sequential cursor over a stream: hands out consecutive counter positions.
class RngCursor {
 public:
  explicit RngCursor(RngStream stream) : stream_(stream) {}

  double u01() { return stream_.uniform01(next_++); }

  // Standard normal via Box-Muller; consumes exactly two counters.
  double normal01() {
    const double u1 = stream_.uniform01_open_below(next_++);
    const double u2 = stream_.uniform01(next_++);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  [[nodiscard]] std::uint64_t position() const { return next_; }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  RngStream stream_;
  std::uint64_t next_ = 0;
};

}  // namespace scmpc
