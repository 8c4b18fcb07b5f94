#pragma once

#include <array>
#include <cstdint>

namespace picardlab {

/// Philox4x32-10 counter-based generator: a pure function from
/// (key, counter) to four 32-bit words, so any Monte Carlo sample can be
/// addressed directly and results do not depend on scheduling.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);
};

/// SplitMix64 finalizer, used to derive keys and substream identifiers.
std::uint64_t mix64(std::uint64_t z);

struct NormalPair {
  double z0;
  double z1;
};

/// Two independent standard normal deviates addressed by
/// (key, counter_hi, counter_lo). Box-Muller over Philox output.
NormalPair normal_pair(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo);

/// One uniform deviate in [0, 1) addressed the same way; draws its own
/// Philox block.
double uniform01(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo);

/// Stateless addressed stream: a (key, stream) pair plus a running counter.
class CounterStream {
 public:
  CounterStream(std::uint64_t key, std::uint64_t stream) : key_(key), stream_(stream) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const NormalPair p = normal_pair(key_, stream_, next_++);
    spare_ = p.z1;
    have_spare_ = true;
    return p.z0;
  }

  double uniform() {
    have_spare_ = false;  // keep the draw order a pure function of usage
    return uniform01(key_, stream_, next_++);
  }

  /// Child stream identifier for branch `index`, collision-resistant.
  std::uint64_t child(std::uint64_t index) const {
    return mix64(stream_ ^ (0x9e3779b97f4a7c15ull + index * 0xbf58476d1ce4e5b9ull));
  }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t next_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace picardlab
