#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace sparkdet {

/// Counter-based pseudo-random source behind every chaotic choice.
///
/// Output k of a source is a pure function of (seed, k), so any state can be
/// replayed from the two integers alone. A source has a single owner; code
/// that fans out (trials, workers, vertices) derives child sources instead
/// of sharing one.
class ChaosSource {
 public:
  explicit ChaosSource(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next() noexcept;
  /// Uniform integer in [0, bound); bound must be non-zero.
  std::uint64_t uniform(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Child source seeded from the next draw of this one.
  ChaosSource split() noexcept { return ChaosSource(mix(next() ^ kSplitTag)); }
  /// Child source for an independent stream id; does not advance this source.
  ChaosSource derive(std::uint64_t stream) const noexcept;

  friend bool operator==(const ChaosSource&, const ChaosSource&) = default;

  static std::uint64_t mix(std::uint64_t x) noexcept;

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSplitTag = 0x5DEECE66Dull;

  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<std::size_t> random_permutation(ChaosSource& chaos, std::size_t n);

template <class T>
std::vector<T> permute(std::span<const T> xs, std::span<const std::size_t> order) {
  std::vector<T> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(xs[i]);
  return out;
}

/// shuffle!: a permutation of xs chosen by the chaos source.
template <class T>
std::vector<T> shuffle(ChaosSource& chaos, std::span<const T> xs) {
  const auto order = random_permutation(chaos, xs.size());
  return permute<T>(xs, order);
}

template <class T>
std::vector<T> shuffle(ChaosSource& chaos, const std::vector<T>& xs) {
  return shuffle(chaos, std::span<const T>(xs));
}

}  // namespace sparkdet
