#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace kolmonet {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Mixes the parts into one 64-bit stream key (splitmix64 chaining).
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

/**
 * Random-access stream of uniforms and standard normals keyed by a 64-bit key.
 *
 * Variate i depends only on (key, i), so streams can be sliced across threads
 * without coordination. Normals come in Box-Muller pairs: variates 2j and 2j+1
 * share Philox block j.
 */
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t key) noexcept;

  /// Uniform on (0, 1).
  double uniform(std::uint64_t index) const noexcept;
  double normal(std::uint64_t index) const noexcept;
  /// out[i] = normal(offset + i)
  void fill_normal(std::span<double> out, std::uint64_t offset = 0) const noexcept;

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t j) const noexcept;

  std::array<std::uint32_t, 2> key_;
};

}  // namespace kolmonet
