#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sparkdet/chaos.hpp"
#include "sparkdet/operator.hpp"
#include "sparkdet/rdd.hpp"

namespace sparkdet {

// ---------------------------------------------------------------------------
// Sequential references

/// foldl op z xs
Value foldl_ref(const Operator& op, const Value& z, std::span<const Value> xs);
/// reducel op xs = foldl op (head xs) (tail xs). Throws EmptyList.
Value reducel_ref(const Operator& op, std::span<const Value> xs);

// ---------------------------------------------------------------------------
// aggregate / reduce
//
// Every chaotic flavor draws its choices from `chaos` and then evaluates the
// deterministic flavor on them, in this order:
//   aggregate, reduce        random_permutation(chaos, #partitions)
//   treeAggregate, treeReduce random_permutation(chaos, #partitions), then
//                             random_plan(chaos, #partitions)
// so a copy of the source taken before the call replays the exact execution.
//
// Operator failures are rethrown with the partition (and element within the
// partition) being folded; failures while combining sub-results carry the
// partition whose sub-result was the right operand.

Value aggregate_dt(const OperatorTriple& t, const Rdd& rdd);
Value aggregate(ChaosSource& chaos, const OperatorTriple& t, const Rdd& rdd);

/// Throws EmptyRdd for zero partitions and EmptyPartition for an empty one.
Value reduce_dt(const Operator& comb, const Rdd& rdd);
Value reduce(ChaosSource& chaos, const Operator& comb, const Rdd& rdd);

/// apply! instantiated by a plan. Throws InvalidPlan.
Value apply_plan(const Operator& comb, std::span<const Value> subresults,
                 const ReductionPlan& plan);

/// Throws EmptyRdd for zero partitions, InvalidPlan for a plan that does not
/// fit the partition count.
Value tree_aggregate_bt(const ReductionPlan& plan, const OperatorTriple& t, const Rdd& rdd);
Value tree_aggregate(ChaosSource& chaos, const OperatorTriple& t, const Rdd& rdd);

Value tree_reduce_bt(const ReductionPlan& plan, const Operator& comb, const Rdd& rdd);
Value tree_reduce(ChaosSource& chaos, const Operator& comb, const Rdd& rdd);

/// Per-partition sub-results, the first stage shared by the families above.
std::vector<Value> fold_partitions(const OperatorTriple& t, const Rdd& rdd);
std::vector<Value> reduce_partitions(const Operator& comb, const Rdd& rdd);

// ---------------------------------------------------------------------------
// Keyed helpers, generic over key and value types so typed message RDDs can
// share them.

template <class K, class V>
using KeyedPartition = std::vector<std::pair<K, V>>;
template <class K, class V>
using KeyedRdd = std::vector<KeyedPartition<K, V>>;

/// Haskell's lookup: the value of the first pair with this key.
template <class K, class V>
const V* find_key(const K& key, std::span<const std::pair<K, V>> ps) {
  for (const auto& [k, v] : ps) {
    if (k == key) return &v;
  }
  return nullptr;
}

/// addTo: drops every pair with this key and adds (key, val). The survivors
/// come out reversed, followed by the new pair.
template <class K, class V>
KeyedPartition<K, V> add_to(const K& key, V val, std::span<const std::pair<K, V>> ps) {
  KeyedPartition<K, V> out;
  out.reserve(ps.size() + 1);
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    if (!(it->first == key)) out.push_back(*it);
  }
  out.emplace_back(key, std::move(val));
  return out;
}

/// foldl (mergeBy fun) [] xs: keys seen for the first time start from zero.
template <class K, class A, class V, class Fun>
KeyedPartition<K, A> fold_merge_by(std::span<const std::pair<K, V>> xs, const A& zero, Fun&& fun) {
  KeyedPartition<K, A> left;
  for (const auto& [k, v] : xs) {
    const A* old = find_key<K, A>(k, left);
    left = add_to<K, A>(k, fun(old ? *old : zero, v), left);
  }
  return left;
}

/// foldl merge [] xs for reduceByKey: the first value of a key seeds it.
template <class K, class V, class Merge>
KeyedPartition<K, V> fold_merge(std::span<const std::pair<K, V>> xs, Merge&& merge) {
  KeyedPartition<K, V> left;
  for (const auto& [k, v] : xs) {
    const V* old = find_key<K, V>(k, left);
    left = add_to<K, V>(k, old ? merge(*old, v) : v, left);
  }
  return left;
}

/// Reorders a keyed result by the first occurrence of each key in `source`.
template <class K, class V, class S>
KeyedPartition<K, V> order_by_first_occurrence(const KeyedPartition<K, V>& merged,
                                               const KeyedRdd<K, S>& source) {
  KeyedPartition<K, V> out;
  out.reserve(merged.size());
  for (const auto& part : source) {
    for (const auto& kv : part) {
      if (find_key<K, V>(kv.first, out)) continue;
      if (const V* v = find_key<K, V>(kv.first, merged)) out.emplace_back(kv.first, *v);
    }
  }
  return out;
}

template <class K, class V>
KeyedRdd<K, V> single_partition(KeyedPartition<K, V> xs) {
  KeyedRdd<K, V> out;
  if (!xs.empty()) out.push_back(std::move(xs));
  return out;
}

/// reduceByKey with a plain callable merge. The deterministic flavor returns
/// one partition ordered by first key occurrence (none for an empty input).
template <class K, class V, class Merge>
KeyedRdd<K, V> reduce_by_key_dt(const KeyedRdd<K, V>& rdd, Merge&& merge) {
  KeyedPartition<K, V> pre;
  for (const auto& part : rdd) {
    auto local = fold_merge<K, V>(part, merge);
    pre.insert(pre.end(), local.begin(), local.end());
  }
  return single_partition(order_by_first_occurrence(fold_merge<K, V>(pre, merge), rdd));
}

/// Chaotic reduceByKey: per-partition results are concatenated in a random
/// order, merged, and the merged list is repartitioned.
template <class K, class V, class Merge>
KeyedRdd<K, V> reduce_by_key(ChaosSource& chaos, const KeyedRdd<K, V>& rdd, Merge&& merge) {
  std::vector<KeyedPartition<K, V>> blocks;
  blocks.reserve(rdd.size());
  for (const auto& part : rdd) blocks.push_back(fold_merge<K, V>(part, merge));
  KeyedPartition<K, V> pre;
  for (std::size_t i : random_permutation(chaos, blocks.size())) {
    pre.insert(pre.end(), blocks[i].begin(), blocks[i].end());
  }
  const auto merged = fold_merge<K, V>(pre, merge);
  return random_partitioning(chaos, merged.size()).apply(merged);
}

template <class K, class V>
std::vector<V> filter_key(const K& key, std::span<const std::pair<K, V>> xs) {
  std::vector<V> out;
  for (const auto& [k, v] : xs) {
    if (k == key) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// aggregateByKey / reduceByKey over Values
//
// Deterministic flavors return a single partition ordered by first key
// occurrence, or zero partitions for an input without pairs. Chaotic flavors
// draw random_permutation(chaos, #partitions) for concatMap! and then
// random_partitioning(chaos, #keys) for the final repartition!.

PairRdd aggregate_by_key_dt(const OperatorTriple& t, const PairRdd& prdd);
PairRdd aggregate_by_key(ChaosSource& chaos, const OperatorTriple& t, const PairRdd& prdd);

PairRdd reduce_by_key_dt(const Operator& merge_value, const PairRdd& prdd);
PairRdd reduce_by_key(ChaosSource& chaos, const Operator& merge_value, const PairRdd& prdd);

/// Values of the pairs with this key, in source order.
std::vector<Value> filterkey(const Value& key, std::span<const KeyValue> xs);

/// First value bound to key across all partitions.
std::optional<Value> lookup(const Value& key, const PairRdd& prdd);

/// Distinct keys in order of first occurrence.
std::vector<Value> keys_of(const PairRdd& prdd);

}  // namespace sparkdet
