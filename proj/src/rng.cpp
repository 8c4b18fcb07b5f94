#include "picardlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace picardlab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit_open(std::uint64_t x) {
  // (0, 1]: safe under log()
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

inline double to_unit_halfopen(std::uint64_t x) {
  // [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::encrypt(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

NormalPair normal_pair(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo) {
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                          static_cast<std::uint32_t>(key >> 32)};
  const std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter_lo), static_cast<std::uint32_t>(counter_lo >> 32),
      static_cast<std::uint32_t>(counter_hi), static_cast<std::uint32_t>(counter_hi >> 32)};
  const auto r = Philox4x32::encrypt(c, k);
  const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
  const double u1 = to_unit_open(a);
  const double u2 = to_unit_halfopen(b);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double uniform01(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo) {
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                          static_cast<std::uint32_t>(key >> 32)};
  // separate cipher domain from normal_pair via the top counter bit pattern
  const std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter_lo), static_cast<std::uint32_t>(counter_lo >> 32),
      static_cast<std::uint32_t>(counter_hi), static_cast<std::uint32_t>(counter_hi >> 32) ^
                                                  0x80000000u};
  const auto r = Philox4x32::encrypt(c, k);
  const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  return to_unit_halfopen(a);
}

}  // namespace picardlab
