#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sparkdet/chaos.hpp"
#include "sparkdet/value.hpp"

namespace sparkdet {

using Partition = std::vector<Value>;
/// A list of partitions; flatten() recovers the underlying data.
using Rdd = std::vector<Partition>;

using KeyValue = std::pair<Value, Value>;
using PairPartition = std::vector<KeyValue>;
/// RDD of key/value pairs. Keys may repeat within and across partitions.
using PairRdd = std::vector<PairPartition>;

inline constexpr std::size_t kDefaultEnumerationCap = 6;

template <class T>
std::vector<T> flatten(const std::vector<std::vector<T>>& parts) {
  std::vector<T> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// map!: map followed by shuffle!.
template <class T, class F>
auto chaotic_map(ChaosSource& chaos, F&& f, std::span<const T> xs) {
  using R = std::decay_t<decltype(f(xs[0]))>;
  std::vector<R> mapped;
  mapped.reserve(xs.size());
  for (const auto& x : xs) mapped.push_back(f(x));
  return shuffle(chaos, std::span<const R>(mapped));
}

/// concatMap!: each f(x) keeps its internal order, the blocks are shuffled.
template <class T, class F>
auto chaotic_concat_map(ChaosSource& chaos, F&& f, std::span<const T> xs) {
  auto blocks = chaotic_map(chaos, std::forward<F>(f), xs);
  return flatten(blocks);
}

/// One concrete outcome of repartition!: a permutation of source indices and
/// the lengths of the contiguous blocks cut from the permuted list.
struct Partitioning {
  std::vector<std::size_t> order;
  std::vector<std::size_t> block_sizes;

  template <class T>
  std::vector<std::vector<T>> apply(std::span<const T> xs) const {
    std::vector<std::vector<T>> out;
    out.reserve(block_sizes.size());
    std::size_t pos = 0;
    for (std::size_t size : block_sizes) {
      std::vector<T> block;
      block.reserve(size);
      for (std::size_t i = 0; i < size; ++i) block.push_back(xs[order[pos++]]);
      out.push_back(std::move(block));
    }
    return out;
  }
  template <class T>
  std::vector<std::vector<T>> apply(const std::vector<T>& xs) const {
    return apply(std::span<const T>(xs));
  }

  friend bool operator==(const Partitioning&, const Partitioning&) = default;
};

/// Uniform permutation, then a uniform composition into non-empty blocks.
/// n == 0 gives zero blocks.
Partitioning random_partitioning(ChaosSource& chaos, std::size_t n);

/// Uniform permutation split into exactly `parts` blocks. Blocks are
/// non-empty when parts <= n; otherwise n singleton blocks are scattered over
/// randomly chosen slots and the rest are empty.
Partitioning random_partitioning_into(ChaosSource& chaos, std::size_t n, std::size_t parts);

/// repartition!
template <class T>
std::vector<std::vector<T>> repartition(ChaosSource& chaos, std::span<const T> xs) {
  return random_partitioning(chaos, xs.size()).apply(xs);
}
inline Rdd repartition(ChaosSource& chaos, const std::vector<Value>& xs) {
  return repartition(chaos, std::span<const Value>(xs));
}

/// Lazily enumerates every permutation of n indices combined with every
/// composition into non-empty contiguous blocks: n! * 2^(n-1) outcomes for
/// n > 0 and the single zero-block outcome for n == 0. With
/// allow_empty_blocks, each outcome with m blocks is followed by the m + 1
/// variants that insert one empty block at each position.
class PartitioningEnumerator {
 public:
  PartitioningEnumerator(std::size_t n, bool allow_empty_blocks,
                         std::size_t cap = kDefaultEnumerationCap);

  std::optional<Partitioning> next();

 private:
  std::vector<std::size_t> base_blocks() const;

  std::size_t n_;
  bool allow_empty_;
  std::vector<std::size_t> order_;
  std::uint64_t mask_ = 0;
  std::uint64_t mask_end_;
  std::size_t insert_ = 0;  // 0 = plain outcome, k = empty block before block k-1
  bool done_ = false;
};

/// allPartitionings: the enumerator above applied to a concrete list.
class RddEnumerator {
 public:
  RddEnumerator(std::vector<Value> xs, bool allow_empty_blocks,
                std::size_t cap = kDefaultEnumerationCap)
      : xs_(std::move(xs)), inner_(xs_.size(), allow_empty_blocks, cap) {}

  std::optional<Rdd> next() {
    auto p = inner_.next();
    if (!p) return std::nullopt;
    return p->apply(xs_);
  }

 private:
  std::vector<Value> xs_;
  PartitioningEnumerator inner_;
};

/// One deterministic instantiation of apply!: merges[i] is the index of the
/// left element of the adjacent pair combined at step i.
struct ReductionPlan {
  std::vector<std::size_t> merges;
  friend bool operator==(const ReductionPlan&, const ReductionPlan&) = default;
};

bool is_valid_plan(const ReductionPlan& plan, std::size_t n);

/// A uniformly chosen adjacent pair at every step.
ReductionPlan random_plan(ChaosSource& chaos, std::size_t n);

/// Every merge sequence reducing n sub-results to one; (n-1)! plans.
class ReductionOrderEnumerator {
 public:
  explicit ReductionOrderEnumerator(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

  std::optional<ReductionPlan> next();

 private:
  std::size_t n_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

}  // namespace sparkdet
