#pragma once

#include <cstdint>

// Deterministic counter-based random streams.
//
// A stream is identified by a 64-bit key; the draw at position i is a pure
// function of (key, i). Trials can therefore be scheduled in any order on any
// number of worker threads and still reproduce bit-identically: every consumer
// derives its own key from a master seed and a short label, and indexes draws
// by trial or vertex id instead of consuming from shared mutable state.

namespace percoflow::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer. Bijective on 64-bit words, passes the usual
// statistical batteries when fed a counter sequence.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// FNV-1a over a label, used to turn stream names into salts.
constexpr std::uint64_t tag(const char* s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (; *s != '\0'; ++s) {
    h ^= static_cast<unsigned char>(*s);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Child key for a named or indexed substream.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t salt) noexcept {
  return mix64(key ^ mix64(salt + kGamma));
}

// Raw 64-bit draw at a counter position.
constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGamma);
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return static_cast<double>(at(key, counter) >> 11) * 0x1.0p-53;
}

// Stateful convenience wrapper around a stream for strictly sequential use.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept { return at(key_, counter_++); }
  double next_unit() noexcept { return unit_at(key_, counter_++); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace percoflow::rng
