#pragma once

// Counter-based random streams. Draw k of stream (seed, index) is a pure
// function of the triple, so samples can be produced in any order or in
// parallel and still reproduce bit for bit.

#include <cstdint>

namespace qprob {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t index) noexcept
      : key_(mix64(mix64(seed) ^ (index * 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + counter * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  }
  constexpr std::uint64_t next() noexcept { return at(counter_++); }
  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qprob
