#include "kolmonet/rng.hpp"

#include <cmath>
#include <numbers>

namespace kolmonet {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 53 random bits mapped to the open interval (0, 1).
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

CounterStream::CounterStream(std::uint64_t key) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

std::array<std::uint32_t, 4> CounterStream::block(std::uint64_t j) const noexcept {
  return philox4x32({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32), 0, 0}, key_);
}

double CounterStream::uniform(std::uint64_t index) const noexcept {
  const auto b = block(index / 2);
  return index % 2 == 0 ? to_unit(b[0], b[1]) : to_unit(b[2], b[3]);
}

double CounterStream::normal(std::uint64_t index) const noexcept {
  const auto b = block(index / 2);
  const double radius = std::sqrt(-2.0 * std::log(to_unit(b[0], b[1])));
  const double angle = 2.0 * std::numbers::pi * to_unit(b[2], b[3]);
  return index % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

void CounterStream::fill_normal(std::span<double> out, std::uint64_t offset) const noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = normal(offset + i);
}

}  // namespace kolmonet
