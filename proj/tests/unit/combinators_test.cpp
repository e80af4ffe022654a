#include <limits>
#include <map>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "sparkdet/combinators.hpp"
#include "sparkdet/error.hpp"
#include "sparkdet/registry.hpp"
#include "values.hpp"

using namespace sparkdet;
using namespace testv;

namespace {

const Operator& op(const char* name) {
  static std::map<std::string, Operator> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, resolve(name)).first;
  return it->second;
}

OperatorTriple int_sum() { return {I(0), op("sum_i64"), op("sum_i64")}; }
OperatorTriple fp_sum() { return {F(0), op("sum_f64"), op("sum_f64")}; }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

PairRdd pairs(std::initializer_list<std::initializer_list<std::pair<const char*, std::int64_t>>> parts) {
  PairRdd out;
  for (auto p : parts) {
    PairPartition part;
    for (auto [k, v] : p) part.emplace_back(S(k), I(v));
    out.push_back(part);
  }
  return out;
}

Rdd permuted(const Rdd& rdd, const std::vector<std::size_t>& order) {
  Rdd out;
  for (auto i : order) out.push_back(rdd[i]);
  return out;
}

}  // namespace

TEST_CASE("sequential references") {
  CHECK(foldl_ref(op("sum_i64"), I(0), ints({1, 2, 3})) == I(6));
  CHECK(foldl_ref(op("sub_i64"), I(7), {}) == I(7));
  CHECK(reducel_ref(op("sub_i64"), ints({1, 2, 3})) == I(-4));
  CHECK(code_of([] { reducel_ref(op("sub_i64"), {}); }) == Errc::empty_list);
}

TEST_CASE("aggregate") {
  ChaosSource s(1);
  CHECK(aggregate(s, int_sum(), int_rdd({{1, 2}, {3}})) == I(6));
  CHECK(aggregate_dt(fp_sum(), float_rdd({{-1e20, 600}, {1e20}})) == F(0.0));
  // 600 is absorbed by -1e20 before 1e20 cancels it.
  CHECK(aggregate_dt(fp_sum(), float_rdd({{-1e20, 600, 1e20}})) == F(0.0));
  CHECK(aggregate_dt(fp_sum(), float_rdd({{-1e20, 1e20, 600}})) == F(600.0));
  CHECK(aggregate_dt(int_sum(), Rdd{}) == I(0));
  const OperatorTriple lists{Value::list({}), op("append"), op("concat_list")};
  CHECK(aggregate_dt(lists, int_rdd({{1}, {2}})) == Value::list({I(1), I(2)}));

  // Chaotic aggregate over the fp example reaches exactly the two orders.
  std::set<Value> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    ChaosSource t(seed);
    seen.insert(aggregate(t, fp_sum(), float_rdd({{-1e20, 600}, {1e20}})));
  }
  CHECK(seen == std::set<Value>{F(0.0)});
  seen.clear();
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    ChaosSource t(seed);
    seen.insert(aggregate(t, fp_sum(), float_rdd({{-1e20}, {600}, {1e20}})));
  }
  CHECK(seen.count(F(0.0)) == 1);
  CHECK(seen.count(F(600.0)) == 1);
}

TEST_CASE("reduce") {
  ChaosSource s(2);
  CHECK(reduce(s, op("max_i64"), int_rdd({{3, 1}, {2}})) == I(3));
  CHECK(reduce_dt(op("sub_i64"), int_rdd({{1, 2, 3}})) == I(-4));
  CHECK(reduce_dt(op("sub_i64"), int_rdd({{1}, {2, 3}})) == I(2));
  CHECK(code_of([] { reduce_dt(op("max_i64"), int_rdd({{}, {1}})); }) == Errc::empty_partition);
  CHECK(code_of([] { reduce_dt(op("max_i64"), Rdd{}); }) == Errc::empty_rdd);
  CHECK(code_of([&] { reduce(s, op("max_i64"), Rdd{}); }) == Errc::empty_rdd);
}

TEST_CASE("applyPlan") {
  const auto& sub = op("sub_i64");
  CHECK(apply_plan(sub, ints({9}), ReductionPlan{}) == I(9));
  CHECK(apply_plan(sub, ints({5, 2}), ReductionPlan{{0}}) == I(3));
  CHECK(apply_plan(sub, ints({5, 2, 1}), ReductionPlan{{0, 0}}) == I(2));
  CHECK(apply_plan(sub, ints({5, 2, 1}), ReductionPlan{{1, 0}}) == I(4));
  CHECK(code_of([&] { apply_plan(sub, ints({5, 2, 1}), ReductionPlan{{2, 0}}); }) ==
        Errc::invalid_plan);
  CHECK(code_of([&] { apply_plan(sub, {}, ReductionPlan{}); }) == Errc::invalid_plan);
  CHECK(code_of([&] { apply_plan(sub, ints({1, 2}), ReductionPlan{}); }) == Errc::invalid_plan);
}

TEST_CASE("treeAggregate and treeReduce") {
  CHECK(tree_aggregate_bt(ReductionPlan{}, int_sum(), int_rdd({{1, 2, 3}})) == I(6));
  const OperatorTriple subs{I(0), op("sub_i64"), op("sub_i64")};
  CHECK(tree_aggregate_bt(ReductionPlan{}, subs, int_rdd({{1, 2, 3}})) == I(-6));

  ReductionOrderEnumerator plans(3);
  std::size_t count = 0;
  while (auto plan = plans.next()) {
    ++count;
    CHECK(tree_aggregate_bt(*plan, int_sum(), int_rdd({{1}, {2}, {3}})) == I(6));
  }
  CHECK(count == 2);

  // seq = sum, comb = sub over partitions [5],[2],[1].
  const OperatorTriple sum_sub{I(0), op("sum_i64"), op("sub_i64")};
  CHECK(tree_aggregate_bt(ReductionPlan{{0, 0}}, sum_sub, int_rdd({{5}, {2}, {1}})) == I(2));
  CHECK(tree_aggregate_bt(ReductionPlan{{1, 0}}, sum_sub, int_rdd({{5}, {2}, {1}})) == I(4));
  CHECK(code_of([&] { tree_aggregate_bt(ReductionPlan{}, int_sum(), Rdd{}); }) == Errc::empty_rdd);
  CHECK(code_of([&] { tree_aggregate_bt(ReductionPlan{}, int_sum(), int_rdd({{1}, {2}})); }) ==
        Errc::invalid_plan);

  CHECK(tree_reduce_bt(ReductionPlan{}, op("sub_i64"), int_rdd({{1, 2, 3}})) == I(-4));
  CHECK(tree_reduce_bt(ReductionPlan{{0, 0}}, op("sub_i64"), int_rdd({{5}, {2}, {1}})) == I(2));
  CHECK(tree_reduce_bt(ReductionPlan{{1, 0}}, op("sub_i64"), int_rdd({{5}, {2}, {1}})) == I(4));
  CHECK(code_of([] { tree_reduce_bt(ReductionPlan{}, op("sub_i64"), Rdd{}); }) == Errc::empty_rdd);
  CHECK(code_of([] { tree_reduce_bt(ReductionPlan{{0}}, op("sub_i64"), int_rdd({{}, {1}})); }) ==
        Errc::empty_partition);

  std::set<Value> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ChaosSource t(seed);
    seen.insert(tree_reduce(t, op("sub_i64"), int_rdd({{5}, {2}, {1}})));
  }
  CHECK(seen.size() >= 2);
}

TEST_CASE("operator failures carry provenance") {
  const auto big = std::numeric_limits<std::int64_t>::max();
  const OperatorTriple checked{I(0), op("sum_i64_checked"), op("sum_i64_checked")};
  Rdd rdd{{I(1)}, {I(2), I(big)}};
  try {
    aggregate_dt(checked, rdd);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::operator_failure);
    CHECK(e.partition() == 1u);
    CHECK(e.element() == 1u);
  }
  try {
    aggregate_dt(checked, Rdd{{I(big)}, {I(1)}});
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.partition() == 1u);
    CHECK(!e.element());
  }
  try {
    reduce_dt(op("max_i64"), Rdd{{I(1)}, {I(2), F(1)}});
    FAIL("expected sort mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sort_mismatch);
    CHECK(e.partition() == 1u);
    CHECK(e.element() == 1u);
  }
}

TEST_CASE("addTo ordering and lookup helpers") {
  const PairPartition ps{{S("a"), I(1)}, {S("b"), I(2)}, {S("c"), I(3)}};
  const auto out = add_to<Value, Value>(S("a"), I(9), ps);
  CHECK(out == PairPartition{{S("c"), I(3)}, {S("b"), I(2)}, {S("a"), I(9)}});
  CHECK(*find_key<Value, Value>(S("b"), ps) == I(2));
  CHECK(find_key<Value, Value>(S("z"), ps) == nullptr);

  CHECK(filterkey(S("a"), {}).empty());
  const PairPartition xs{{S("a"), I(1)}, {S("b"), I(2)}, {S("a"), I(3)}};
  CHECK(filterkey(S("a"), xs) == ints({1, 3}));
  CHECK(filterkey(S("z"), PairPartition{{S("a"), I(1)}}).empty());
  CHECK(keys_of(PairRdd{xs}) == std::vector<Value>{S("a"), S("b")});
}

TEST_CASE("aggregateByKey") {
  const auto out = aggregate_by_key_dt(int_sum(), pairs({{{"a", 1}, {"b", 2}, {"a", 3}}}));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == PairPartition{{S("a"), I(4)}, {S("b"), I(2)}});
  CHECK(aggregate_by_key_dt(int_sum(), PairRdd{}).empty());
  CHECK(aggregate_by_key_dt(int_sum(), PairRdd{{}, {}}).empty());

  const auto split = aggregate_by_key_dt(int_sum(), pairs({{{"b", 1}}, {{"a", 2}, {"b", 3}}, {}}));
  CHECK(split == PairRdd{{{S("b"), I(4)}, {S("a"), I(2)}}});

  ChaosSource s(5);
  for (int i = 0; i < 50; ++i) {
    const auto r = aggregate_by_key(s, int_sum(), pairs({{{"a", 1}, {"b", 2}}, {{"a", 3}}}));
    CHECK(lookup(S("a"), r) == I(4));
    CHECK(lookup(S("b"), r) == I(2));
    CHECK(flatten(r).size() == 2);
  }

  // Per-key fp sums depend on the partitioning.
  std::vector<Value> items;
  for (double v : {-1e20, 600.0, 1e20}) items.push_back(Value::pair(S("k"), F(v)));
  std::set<Value> seen;
  PartitioningEnumerator e(items.size(), false);
  while (auto p = e.next()) {
    PairRdd prdd;
    for (const auto& block : p->apply(items)) {
      PairPartition part;
      for (const auto& kv : block) part.emplace_back(kv.first(), kv.second());
      prdd.push_back(part);
    }
    seen.insert(*lookup(S("k"), aggregate_by_key_dt(fp_sum(), prdd)));
  }
  CHECK(seen.size() >= 2);
  CHECK(seen.count(F(0.0)) == 1);
  CHECK(seen.count(F(600.0)) == 1);
}

TEST_CASE("reduceByKey") {
  const auto out = reduce_by_key_dt(op("max_i64"), pairs({{{"a", 1}, {"a", 5}}}));
  CHECK(lookup(S("a"), out) == I(5));
  CHECK(lookup(S("k"), reduce_by_key_dt(op("max_i64"), pairs({{{"k", 9}}}))) == I(9));
  CHECK(reduce_by_key_dt(op("max_i64"), PairRdd{}).empty());
  CHECK(lookup(S("a"), reduce_by_key_dt(op("sub_i64"), pairs({{{"a", 1}}, {{"a", 2}, {"a", 3}}}))) ==
        I(2));
  ChaosSource s(6);
  const auto r = reduce_by_key(s, op("sum_i64"), pairs({{{"a", 1}}, {{"b", 2}, {"a", 3}}}));
  CHECK(lookup(S("a"), r) == I(4));
}

TEST_CASE("reduceByKey equals the maybe-lifted aggregateByKey") {
  ChaosSource s(404);
  for (const char* name : {"sum_i64", "sub_i64", "max_i64", "min_i64"}) {
    const auto lifted = lift_to_maybe(op(name));
    const OperatorTriple t{Value::none(), lifted.seq, lifted.comb};
    for (int trial = 0; trial < 300; ++trial) {
      PairRdd prdd;
      const auto parts = s.uniform(4);
      for (std::uint64_t p = 0; p < parts; ++p) {
        PairPartition part;
        const auto n = s.uniform(5);
        for (std::uint64_t i = 0; i < n; ++i) {
          part.emplace_back(I(small_int(s, 0, 2)), I(small_int(s, -5, 5)));
        }
        prdd.push_back(part);
      }
      const auto reduced = reduce_by_key_dt(op(name), prdd);
      const auto aggregated = aggregate_by_key_dt(t, prdd);
      CHECK(keys_of(reduced) == keys_of(aggregated));
      for (const auto& k : keys_of(reduced)) {
        CHECK(Value::some(*lookup(k, reduced)) == *lookup(k, aggregated));
      }
    }
  }
}

TEST_CASE("split-fold and reducel' laws") {
  ChaosSource s(55);
  const char* names[] = {"sum_i64", "sub_i64", "max_i64", "expr:x*y-1", "sum_f64"};
  for (const char* name : names) {
    const auto& f = op(name);
    for (int trial = 0; trial < 500; ++trial) {
      const auto l1 = random_ints(s, 5, -4, 4);
      const auto l2 = random_ints(s, 5, -4, 4);
      auto both = l1;
      both.insert(both.end(), l2.begin(), l2.end());
      const Value z = I(small_int(s, -3, 3));
      CHECK(foldl_ref(f, z, both) == foldl_ref(f, foldl_ref(f, z, l1), l2));
      if (!both.empty()) {
        const auto lifted = lift_to_maybe(f);
        CHECK(reducel_ref(f, both) == foldl_ref(lifted.seq, Value::none(), both).unwrap());
      }
    }
  }
}

TEST_CASE("reduce as a lifted aggregate") {
  ChaosSource s(56);
  for (const char* name : {"sub_i64", "max_i64", "sum_f64"}) {
    const auto& f = op(name);
    const auto lifted = lift_to_maybe(f);
    const OperatorTriple t{Value::none(), lifted.seq, lifted.comb};
    for (int trial = 0; trial < 500; ++trial) {
      auto xs = random_ints(s, 8, -9, 9);
      if (xs.empty()) xs.push_back(I(1));
      const auto rdd = random_split(s, xs, false);
      CHECK(reduce_dt(f, rdd) == aggregate_dt(t, rdd).unwrap());
    }
  }
}

TEST_CASE("applyPlan with the all-zero plan is reducel") {
  ChaosSource s(57);
  for (int trial = 0; trial < 500; ++trial) {
    auto xs = random_ints(s, 8, -9, 9);
    if (xs.empty()) continue;
    ReductionPlan plan{std::vector<std::size_t>(xs.size() - 1, 0)};
    CHECK(apply_plan(op("sub_i64"), xs, plan) == reducel_ref(op("sub_i64"), xs));
  }
}

TEST_CASE("chaotic flavors replay through their deterministic flavors") {
  ChaosSource gen(58);
  const OperatorTriple fp = fp_sum();
  for (int trial = 0; trial < 300; ++trial) {
    auto xs = random_floats(gen, 10);
    if (xs.empty()) xs.push_back(F(1));
    const auto rdd = random_split(gen, xs, false);
    const ChaosSource before = gen.split();

    ChaosSource run = before;
    ChaosSource replay = before;
    CHECK(aggregate(run, fp, rdd) == aggregate_dt(fp, permuted(rdd, random_permutation(replay, rdd.size()))));

    run = before;
    replay = before;
    {
      const auto order = random_permutation(replay, rdd.size());
      const auto plan = random_plan(replay, rdd.size());
      CHECK(tree_aggregate(run, fp, rdd) == tree_aggregate_bt(plan, fp, permuted(rdd, order)));
    }

    run = before;
    replay = before;
    CHECK(reduce(run, op("sum_f64"), rdd) ==
          reduce_dt(op("sum_f64"), permuted(rdd, random_permutation(replay, rdd.size()))));

    run = before;
    replay = before;
    {
      const auto order = random_permutation(replay, rdd.size());
      const auto plan = random_plan(replay, rdd.size());
      CHECK(tree_reduce(run, op("sum_f64"), rdd) ==
            tree_reduce_bt(plan, op("sum_f64"), permuted(rdd, order)));
    }
  }
}

TEST_CASE("chaotic by-key replays through the deterministic flavor") {
  ChaosSource gen(59);
  for (int trial = 0; trial < 200; ++trial) {
    PairRdd prdd;
    const auto parts = 1 + gen.uniform(4);
    for (std::uint64_t p = 0; p < parts; ++p) {
      PairPartition part;
      const auto n = gen.uniform(4);
      for (std::uint64_t i = 0; i < n; ++i) {
        part.emplace_back(I(small_int(gen, 0, 3)), F(gen.uniform(2) ? 1e20 : 600.0));
      }
      prdd.push_back(part);
    }
    ChaosSource run = gen.split();
    ChaosSource replay = run;
    const auto out = aggregate_by_key(run, fp_sum(), prdd);
    PairRdd reordered;
    for (auto i : random_permutation(replay, prdd.size())) reordered.push_back(prdd[i]);
    const auto expected = aggregate_by_key_dt(fp_sum(), reordered);
    const auto keys = keys_of(expected);
    CHECK(flatten(out).size() == keys.size());
    for (const auto& k : keys) CHECK(lookup(k, out) == lookup(k, expected));
  }
}

TEST_CASE("per-key projection") {
  ChaosSource gen(60);
  const OperatorTriple sub{I(0), op("sub_i64"), op("sum_i64")};
  for (int trial = 0; trial < 300; ++trial) {
    PairRdd prdd;
    const auto parts = gen.uniform(4);
    for (std::uint64_t p = 0; p < parts; ++p) {
      PairPartition part;
      const auto n = gen.uniform(4);
      for (std::uint64_t i = 0; i < n; ++i) part.emplace_back(I(small_int(gen, 0, 2)), I(small_int(gen, -5, 5)));
      prdd.push_back(part);
    }
    const auto agg = aggregate_by_key_dt(sub, prdd);
    for (const auto& k : keys_of(prdd)) {
      Rdd projected;
      for (const auto& part : prdd) {
        auto vals = filterkey(k, part);
        if (!vals.empty()) projected.push_back(vals);
      }
      CHECK(lookup(k, agg) == aggregate_dt(sub, projected));
    }
  }
}
