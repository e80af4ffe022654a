#include "sparkdet/chaos.hpp"

namespace sparkdet {

std::uint64_t ChaosSource::mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t ChaosSource::next() noexcept {
  ++counter_;
  return mix(seed_ + counter_ * kGolden);
}

std::uint64_t ChaosSource::uniform(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection of the biased low region.
  std::uint64_t x = next();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double ChaosSource::uniform01() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

ChaosSource ChaosSource::derive(std::uint64_t stream) const noexcept {
  return ChaosSource(mix(seed_ ^ mix(stream * kGolden + kSplitTag)));
}

std::vector<std::size_t> random_permutation(ChaosSource& chaos, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(chaos.uniform(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace sparkdet
