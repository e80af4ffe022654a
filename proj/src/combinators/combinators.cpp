#include "sparkdet/combinators.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

template <class F>
Value located(std::optional<std::size_t> partition, std::optional<std::size_t> element, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.at(partition, element);
  }
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

Value fold_partition(const Operator& seq, const Value& z, const Partition& part, std::size_t p) {
  Value acc = z;
  for (std::size_t i = 0; i < part.size(); ++i) {
    acc = located(p, i, [&] { return seq(acc, part[i]); });
  }
  return acc;
}

Value reduce_partition(const Operator& comb, const Partition& part, std::size_t p) {
  if (part.empty()) {
    throw Error(Errc::empty_partition, "reducel of an empty partition").at(p, std::nullopt);
  }
  Value acc = part[0];
  for (std::size_t i = 1; i < part.size(); ++i) {
    acc = located(p, i, [&] { return comb(acc, part[i]); });
  }
  return acc;
}

// Left fold of sub-results taken in `order`; errors name the source partition.
Value fold_subresults(const Operator& comb, Value acc, const std::vector<Value>& subs,
                      const std::vector<std::size_t>& order) {
  for (std::size_t p : order) {
    acc = located(p, std::nullopt, [&] { return comb(acc, subs[p]); });
  }
  return acc;
}

Value reduce_subresults(const Operator& comb, const std::vector<Value>& subs,
                        const std::vector<std::size_t>& order) {
  Value acc = subs[order[0]];
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t p = order[i];
    acc = located(p, std::nullopt, [&] { return comb(acc, subs[p]); });
  }
  return acc;
}

Value apply_plan_from(const Operator& comb, std::vector<Value> xs, std::vector<std::size_t> origin,
                      const ReductionPlan& plan) {
  if (!is_valid_plan(plan, xs.size())) {
    std::string idx;
    for (auto m : plan.merges) idx += (idx.empty() ? "" : ",") + std::to_string(m);
    throw Error(Errc::invalid_plan, "plan [" + idx + "] does not reduce " +
                                        std::to_string(xs.size()) + " sub-results");
  }
  for (std::size_t m : plan.merges) {
    xs[m] = located(origin[m + 1], std::nullopt, [&] { return comb(xs[m], xs[m + 1]); });
    xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(m) + 1);
    origin.erase(origin.begin() + static_cast<std::ptrdiff_t>(m) + 1);
  }
  return xs[0];
}

void require_partitions(const Rdd& rdd, const char* what) {
  if (rdd.empty()) throw Error(Errc::empty_rdd, std::string(what) + " of an RDD with no partitions");
}

std::vector<Value> in_order(const std::vector<Value>& subs, const std::vector<std::size_t>& order) {
  std::vector<Value> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(subs[i]);
  return out;
}

}  // namespace

Value foldl_ref(const Operator& op, const Value& z, std::span<const Value> xs) {
  Value acc = z;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc = located(std::nullopt, i, [&] { return op(acc, xs[i]); });
  }
  return acc;
}

Value reducel_ref(const Operator& op, std::span<const Value> xs) {
  if (xs.empty()) throw Error(Errc::empty_list, "reducel of an empty list");
  return foldl_ref(op, xs[0], xs.subspan(1));
}

std::vector<Value> fold_partitions(const OperatorTriple& t, const Rdd& rdd) {
  std::vector<Value> subs;
  subs.reserve(rdd.size());
  for (std::size_t p = 0; p < rdd.size(); ++p) subs.push_back(fold_partition(t.seq, t.zero, rdd[p], p));
  return subs;
}

std::vector<Value> reduce_partitions(const Operator& comb, const Rdd& rdd) {
  std::vector<Value> subs;
  subs.reserve(rdd.size());
  for (std::size_t p = 0; p < rdd.size(); ++p) subs.push_back(reduce_partition(comb, rdd[p], p));
  return subs;
}

Value aggregate_dt(const OperatorTriple& t, const Rdd& rdd) {
  return fold_subresults(t.comb, t.zero, fold_partitions(t, rdd), identity_order(rdd.size()));
}

Value aggregate(ChaosSource& chaos, const OperatorTriple& t, const Rdd& rdd) {
  const auto order = random_permutation(chaos, rdd.size());
  return fold_subresults(t.comb, t.zero, fold_partitions(t, rdd), order);
}

Value reduce_dt(const Operator& comb, const Rdd& rdd) {
  require_partitions(rdd, "reduce");
  return reduce_subresults(comb, reduce_partitions(comb, rdd), identity_order(rdd.size()));
}

Value reduce(ChaosSource& chaos, const Operator& comb, const Rdd& rdd) {
  require_partitions(rdd, "reduce");
  const auto order = random_permutation(chaos, rdd.size());
  return reduce_subresults(comb, reduce_partitions(comb, rdd), order);
}

Value apply_plan(const Operator& comb, std::span<const Value> subresults,
                 const ReductionPlan& plan) {
  return apply_plan_from(comb, std::vector<Value>(subresults.begin(), subresults.end()),
                         identity_order(subresults.size()), plan);
}

Value tree_aggregate_bt(const ReductionPlan& plan, const OperatorTriple& t, const Rdd& rdd) {
  require_partitions(rdd, "treeAggregate");
  return apply_plan_from(t.comb, fold_partitions(t, rdd), identity_order(rdd.size()), plan);
}

Value tree_aggregate(ChaosSource& chaos, const OperatorTriple& t, const Rdd& rdd) {
  require_partitions(rdd, "treeAggregate");
  const auto order = random_permutation(chaos, rdd.size());
  const auto plan = random_plan(chaos, rdd.size());
  return apply_plan_from(t.comb, in_order(fold_partitions(t, rdd), order), order, plan);
}

Value tree_reduce_bt(const ReductionPlan& plan, const Operator& comb, const Rdd& rdd) {
  require_partitions(rdd, "treeReduce");
  return apply_plan_from(comb, reduce_partitions(comb, rdd), identity_order(rdd.size()), plan);
}

Value tree_reduce(ChaosSource& chaos, const Operator& comb, const Rdd& rdd) {
  require_partitions(rdd, "treeReduce");
  const auto order = random_permutation(chaos, rdd.size());
  const auto plan = random_plan(chaos, rdd.size());
  return apply_plan_from(comb, in_order(reduce_partitions(comb, rdd), order), order, plan);
}

namespace {

// Pre-aggregation of one partition with provenance on failures.
PairPartition pre_aggregate(const OperatorTriple& t, const PairPartition& part, std::size_t p) {
  std::size_t i = 0;
  return fold_merge_by<Value, Value, Value>(part, t.zero, [&](const Value& acc, const Value& v) {
    return located(p, i++, [&] { return t.seq(acc, v); });
  });
}

PairPartition pre_reduce(const Operator& merge, const PairPartition& part, std::size_t p) {
  PairPartition left;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const auto& [k, v] = part[i];
    const Value* old = find_key<Value, Value>(k, left);
    Value next = old ? located(p, i, [&] { return merge(*old, v); }) : v;
    left = add_to<Value, Value>(k, std::move(next), left);
  }
  return left;
}

// Concatenates per-partition blocks in `order`; origin[j] is the partition of
// the j-th pair of the result.
PairPartition concat_blocks(const std::vector<PairPartition>& blocks,
                            const std::vector<std::size_t>& order,
                            std::vector<std::size_t>& origin) {
  PairPartition out;
  for (std::size_t p : order) {
    out.insert(out.end(), blocks[p].begin(), blocks[p].end());
    origin.insert(origin.end(), blocks[p].size(), p);
  }
  return out;
}

PairPartition merge_aggregated(const OperatorTriple& t, const std::vector<PairPartition>& blocks,
                               const std::vector<std::size_t>& order) {
  std::vector<std::size_t> origin;
  const auto pre = concat_blocks(blocks, order, origin);
  std::size_t j = 0;
  return fold_merge_by<Value, Value, Value>(pre, t.zero, [&](const Value& acc, const Value& v) {
    const std::size_t p = origin[j++];
    return located(p, std::nullopt, [&] { return t.comb(acc, v); });
  });
}

PairPartition merge_reduced(const Operator& merge, const std::vector<PairPartition>& blocks,
                            const std::vector<std::size_t>& order) {
  std::vector<std::size_t> origin;
  const auto pre = concat_blocks(blocks, order, origin);
  PairPartition left;
  for (std::size_t j = 0; j < pre.size(); ++j) {
    const auto& [k, v] = pre[j];
    const Value* old = find_key<Value, Value>(k, left);
    Value next = old ? located(origin[j], std::nullopt, [&] { return merge(*old, v); }) : v;
    left = add_to<Value, Value>(k, std::move(next), left);
  }
  return left;
}

}  // namespace

PairRdd aggregate_by_key_dt(const OperatorTriple& t, const PairRdd& prdd) {
  std::vector<PairPartition> blocks;
  for (std::size_t p = 0; p < prdd.size(); ++p) blocks.push_back(pre_aggregate(t, prdd[p], p));
  auto merged = merge_aggregated(t, blocks, identity_order(blocks.size()));
  return single_partition(order_by_first_occurrence(merged, prdd));
}

PairRdd aggregate_by_key(ChaosSource& chaos, const OperatorTriple& t, const PairRdd& prdd) {
  std::vector<PairPartition> blocks;
  for (std::size_t p = 0; p < prdd.size(); ++p) blocks.push_back(pre_aggregate(t, prdd[p], p));
  const auto order = random_permutation(chaos, blocks.size());
  const auto merged = merge_aggregated(t, blocks, order);
  return random_partitioning(chaos, merged.size()).apply(merged);
}

PairRdd reduce_by_key_dt(const Operator& merge_value, const PairRdd& prdd) {
  std::vector<PairPartition> blocks;
  for (std::size_t p = 0; p < prdd.size(); ++p) blocks.push_back(pre_reduce(merge_value, prdd[p], p));
  auto merged = merge_reduced(merge_value, blocks, identity_order(blocks.size()));
  return single_partition(order_by_first_occurrence(merged, prdd));
}

PairRdd reduce_by_key(ChaosSource& chaos, const Operator& merge_value, const PairRdd& prdd) {
  std::vector<PairPartition> blocks;
  for (std::size_t p = 0; p < prdd.size(); ++p) blocks.push_back(pre_reduce(merge_value, prdd[p], p));
  const auto order = random_permutation(chaos, blocks.size());
  const auto merged = merge_reduced(merge_value, blocks, order);
  return random_partitioning(chaos, merged.size()).apply(merged);
}

std::vector<Value> filterkey(const Value& key, std::span<const KeyValue> xs) {
  return filter_key<Value, Value>(key, xs);
}

std::optional<Value> lookup(const Value& key, const PairRdd& prdd) {
  for (const auto& part : prdd) {
    if (const Value* v = find_key<Value, Value>(key, part)) return *v;
  }
  return std::nullopt;
}

std::vector<Value> keys_of(const PairRdd& prdd) {
  std::vector<Value> keys;
  for (const auto& part : prdd) {
    for (const auto& kv : part) {
      if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) keys.push_back(kv.first);
    }
  }
  return keys;
}

}  // namespace sparkdet
