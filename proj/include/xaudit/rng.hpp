// Deterministic, portable random number generation.
//
// The standard library's distributions (std::normal_distribution,
// std::shuffle, ...) are implementation-defined, so identical seeds produce
// different streams on different standard libraries. Every artifact here must
// be byte-identical for a given seed, so we hand-roll the whole stack:
// SplitMix64 for seed derivation, xoshiro256** as the stream generator,
// Box-Muller for normals and Fisher-Yates for shuffles.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace xaudit {

/// One SplitMix64 step; advances `state` and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a stream tag (and optional index) into a master seed, yielding an
/// independent child seed. Used everywhere a component needs its own stream
/// (per feature, per repeat, per run, ...) so that parallel loop order can
/// never influence which random numbers an element consumes.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t s = master;
  (void)splitmix64_next(s);
  s ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
  (void)splitmix64_next(s);
  s ^= 0xd1b54a32d192ed03ULL * (index + 1);
  return splitmix64_next(s);
}

/// xoshiro256** generator seeded via SplitMix64 (never all-zero state).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); bound must be nonzero.
  /// Lemire multiply-shift: deterministic, no rejection loop.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * bound) >> 64);
  }

  /// Box-Muller transform; consumes exactly two draws per call.
  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Fisher-Yates shuffle (identical element order on every platform).
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

// Stream tags for derive_seed. Centralized so two components can never
// accidentally share a stream.
namespace streams {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kFit = 2;
inline constexpr std::uint64_t kMlpInit = 3;
inline constexpr std::uint64_t kMlpShuffle = 4;
inline constexpr std::uint64_t kPermutation = 5;
inline constexpr std::uint64_t kShapBackground = 6;
inline constexpr std::uint64_t kShapCoalitions = 7;
inline constexpr std::uint64_t kShapInstances = 8;
inline constexpr std::uint64_t kSynthLabels = 9;
inline constexpr std::uint64_t kSynthInformative = 10;
inline constexpr std::uint64_t kSynthNoise = 11;
inline constexpr std::uint64_t kSynthPairBase = 12;
inline constexpr std::uint64_t kSynthPairJitter = 13;
inline constexpr std::uint64_t kReceiver = 14;
inline constexpr std::uint64_t kSweepRun = 15;
inline constexpr std::uint64_t kSweepSplit = 16;
inline constexpr std::uint64_t kExplain = 17;
}  // namespace streams

}  // namespace xaudit
