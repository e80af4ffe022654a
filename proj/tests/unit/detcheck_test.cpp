#include <algorithm>
#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "sparkdet/detcheck.hpp"
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

OperatorTriple triple(Value z, const char* seq, const char* comb) { return {z, op(seq), op(comb)}; }

const LawReport& law_of(const std::vector<LawReport>& laws, Law l) {
  for (const auto& r : laws) {
    if (r.law == l) return r;
  }
  FAIL("law missing");
  return laws.front();
}

Domain float_domain(std::initializer_list<double> xs) { return Domain::of(floats(xs)); }

Domain singleton_lists(std::initializer_list<std::int64_t> xs) {
  std::vector<Value> d;
  for (auto x : xs) d.push_back(Value::list({I(x)}));
  return Domain::of(d);
}

}  // namespace

TEST_CASE("closure of the accumulator image") {
  const auto acc = accumulator_closure(triple(I(0), "max_i64", "max_i64"), Domain::int_range(-2, 2));
  CHECK(acc.closed);
  CHECK(acc.values == ints({0, 1, 2}));
  CHECK(acc.sources[*acc.index_of(I(2))] == ints({2}));

  CheckOptions o;
  o.max_level = 3;
  const auto sum = accumulator_closure(triple(I(0), "sum_i64", "sum_i64"), Domain::int_range(-2, 2), o);
  CHECK_FALSE(sum.closed);
  CHECK(sum.level_bound == 3);
  CHECK(sum.values.size() == 13);  // -6..6
  CHECK(sum.sources[*sum.index_of(I(-6))] == ints({-2, -2, -2}));

  o.size_cap = 8;
  const auto cut = accumulator_closure(triple(I(0), "sum_i64", "sum_i64"), Domain::int_range(-2, 2), o);
  CHECK(cut.truncated);
  CHECK(cut.level_bound == 1);
  CHECK(cut.values.size() == 5);

  const auto red = reduce_closure(op("sub_i64"), Domain::int_range(1, 2), o);
  CHECK(red.values.front() == I(-3));
}

TEST_CASE("monoid laws") {
  const auto dom = Domain::int_range(-2, 2);
  const auto t = triple(I(0), "sum_i64", "sum_i64");
  for (const auto& r : check_monoid_laws(t.comb, t.zero, accumulator_closure(t, dom), dom)) {
    CHECK_MESSAGE(r.status == LawStatus::holds, to_string(r.law));
  }

  const auto fdom = float_domain({1e20, -1e20, 600});
  const auto ft = triple(F(0), "sum_f64", "sum_f64");
  const auto fl = check_monoid_laws(ft.comb, ft.zero, accumulator_closure(ft, fdom), fdom);
  const auto& assoc = law_of(fl, Law::associativity);
  REQUIRE(assoc.status == LawStatus::violated);
  CHECK(assoc.source == Approximation::closure);
  const auto& w = assoc.witness;
  CHECK(ft.comb(ft.comb(w[0], w[1]), w[2]) != ft.comb(w[0], ft.comb(w[1], w[2])));
  CHECK(w == floats({-1e20, 1e20, 600}));
  CHECK(assoc.sides == floats({600, 0}));
  // The textbook instance fails the same way.
  CHECK(ft.comb(ft.comb(F(1e20), F(-1e20)), F(600)) == F(600));
  CHECK(ft.comb(F(1e20), ft.comb(F(-1e20), F(600))) == F(0));

  const auto ldom = singleton_lists({1, 2});
  const auto lt = triple(Value::list({}), "concat_list", "concat_list");
  const auto ll = check_monoid_laws(lt.comb, lt.zero, accumulator_closure(lt, ldom), ldom);
  const auto& comm = law_of(ll, Law::commutativity);
  REQUIRE(comm.status == LawStatus::violated);
  CHECK(comm.witness == std::vector<Value>{Value::list({I(1)}), Value::list({I(2)})});
  CHECK(law_of(ll, Law::identity).status == LawStatus::holds);
  CHECK(law_of(ll, Law::associativity).status == LawStatus::holds);
}

TEST_CASE("homomorphism law") {
  const auto dom = Domain::int_range(-3, 3);
  CHECK(check_homomorphism(triple(I(0), "sub_i64", "sum_i64"),
                           accumulator_closure(triple(I(0), "sub_i64", "sum_i64"), dom), dom)
            .status == LawStatus::holds);

  // Multiplication into a sum fails on e = 2, d = 3.
  const auto mul = triple(F(0), "expr:x*y", "sum_f64");
  AccumulatorSet acc;
  acc.values = floats({0, 2});
  acc.sources = {{}, {}};
  acc.levels = {0, 0};
  acc.closed = true;
  const auto r = check_homomorphism(mul, acc, Domain::of(ints({3})));
  REQUIRE(r.status == LawStatus::violated);
  CHECK(r.witness == std::vector<Value>{F(2), I(3)});
  CHECK(r.sides == floats({6, 2}));

  // Over the real image (0 and -0) the law fails through the sign of zero.
  const auto real = check_homomorphism(mul, accumulator_closure(mul, dom), dom);
  REQUIRE(real.status == LawStatus::violated);
  CHECK(real.witness == std::vector<Value>{F(0), I(-3)});
}

TEST_CASE("sort-sample witnesses are flagged") {
  // max with zero 0 is a monoid on the image {0, 1, 2} but not on all ints.
  const auto dom = Domain::int_range(-2, 2);
  const auto t = triple(I(0), "max_i64", "max_i64");
  const auto laws = check_monoid_laws(t.comb, t.zero, accumulator_closure(t, dom), dom);
  const auto& id = law_of(laws, Law::identity);
  REQUIRE(id.status == LawStatus::violated);
  CHECK(id.source == Approximation::sort_sample);
  CHECK(id.witness.front().as_int() < 0);

  const auto v = check_aggregate(t, dom);
  CHECK(v.kind == VerdictKind::deterministic);
  CHECK_FALSE(v.warnings.empty());

  CheckOptions off;
  off.sort_sample = false;
  CHECK(law_of(check_monoid_laws(t.comb, t.zero, accumulator_closure(t, dom), dom, off), Law::identity)
            .status == LawStatus::holds);
}

TEST_CASE("aggregate verdicts") {
  const auto dom = Domain::int_range(-2, 2);
  CHECK(check_aggregate(triple(I(0), "sum_i64", "sum_i64"), dom).kind == VerdictKind::deterministic);
  CHECK(check_aggregate(triple(I(0), "sub_i64", "sum_i64"), dom).kind == VerdictKind::deterministic);

  const auto bad = check_aggregate(triple(I(0), "max_i64", "sum_i64"), dom);
  CHECK(bad.kind == VerdictKind::non_deterministic);
  REQUIRE(bad.counterexample);
  CHECK(replays(Subject::of(Combinator::aggregate, triple(I(0), "max_i64", "sum_i64")),
                *bad.counterexample));

  const auto fp = check_aggregate(triple(F(0), "sum_f64", "sum_f64"), float_domain({1e20, -1e20, 600}));
  CHECK(fp.kind == VerdictKind::non_deterministic);
  REQUIRE(fp.counterexample);
  CHECK(fp.counterexample->input.size() == 3);
}

TEST_CASE("reduce verdicts") {
  const auto dom = Domain::int_range(1, 2);
  CHECK(check_reduce(op("max_i64"), dom).kind == VerdictKind::deterministic);
  CHECK(check_reduce(op("union_set"), Domain::of({Value::set({I(1)}), Value::set({I(2)})})).kind ==
        VerdictKind::deterministic);

  const auto sub = check_reduce(op("sub_i64"), dom);
  CHECK(sub.kind == VerdictKind::non_deterministic);
  const auto& comm = law_of(sub.laws, Law::commutativity);
  CHECK(comm.witness == ints({1, 2}));
  REQUIRE(sub.counterexample);
  CHECK(replays(Subject::of(Combinator::reduce, op("sub_i64")), *sub.counterexample));
}

TEST_CASE("tree and by-key checks delegate") {
  const auto dom = Domain::int_range(-2, 2);
  const auto ok = triple(I(0), "sum_i64", "sum_i64");
  const auto bad = triple(I(0), "sum_i64", "sub_i64");

  auto t = check_tree_aggregate(ok, dom);
  CHECK(t.kind == VerdictKind::deterministic);
  CHECK(t.delegated_to == Combinator::aggregate);
  CHECK(check_tree_aggregate(bad, dom).kind == check_aggregate(bad, dom).kind);
  CHECK(check_tree_reduce(op("sub_i64"), dom).delegated_to == Combinator::reduce);

  const auto k = check_aggregate_by_key(bad, dom);
  CHECK(k.kind == VerdictKind::non_deterministic);
  CHECK(k.delegated_to == Combinator::aggregate);
  REQUIRE(k.counterexample);
  CHECK(k.counterexample->key == S("a"));
  CHECK(replays(Subject::of(Combinator::aggregate_by_key, bad), *k.counterexample));

  CHECK(check_reduce_by_key(op("max_i64"), dom).kind == VerdictKind::deterministic);
  CHECK(check_reduce_by_key(op("sub_i64"), dom).kind == VerdictKind::non_deterministic);
}

TEST_CASE("aggregateMessages check is only sufficient") {
  const auto dom = Domain::int_range(-2, 2);
  CHECK(check_aggregate_messages(op("sum_i64"), dom).kind == VerdictKind::deterministic);
  CHECK(check_aggregate_messages(op("min_i64"), dom).kind == VerdictKind::deterministic);
  const auto sub = check_aggregate_messages(op("sub_i64"), dom);
  CHECK(sub.kind == VerdictKind::unknown);
  CHECK(sub.cause == "sufficient_condition_failed");
  CHECK_FALSE(sub.counterexample);
}

TEST_CASE("operator errors make the verdict unknown") {
  const auto v = check_aggregate(triple(I(0), "sum_i64_checked", "sum_i64_checked"),
                                 Domain::int_range(-2, 2));
  CHECK(v.kind == VerdictKind::unknown);
  CHECK(v.cause == "operator_error");
}

TEST_CASE("comb ignoring an argument is flagged") {
  const auto v = check_aggregate(triple(I(0), "sum_i64", "const_left"), Domain::int_range(0, 2));
  CHECK(std::any_of(v.warnings.begin(), v.warnings.end(),
                    [](const std::string& w) { return w.find("ignores its right") != std::string::npos; }));
}

TEST_CASE("oracle examples") {
  const auto sub = oracle_reduce(op("sub_i64"), ints({1, 2, 3}));
  CHECK(sub.kind == VerdictKind::non_deterministic);
  CHECK(std::count(sub.observed.begin(), sub.observed.end(), I(-4)) == 1);
  CHECK(std::count(sub.observed.begin(), sub.observed.end(), I(2)) == 1);
  REQUIRE(sub.counterexample);
  CHECK(replays(Subject::of(Combinator::reduce, op("sub_i64")), *sub.counterexample));

  CHECK(oracle_reduce(op("max_i64"), ints({3, 1, 2})).kind == VerdictKind::deterministic);
  CHECK(oracle_aggregate(triple(I(0), "sum_i64", "sum_i64"), ints({1, 2, 3, 4})).kind ==
        VerdictKind::deterministic);

  const auto fp = oracle_aggregate(triple(F(0), "sum_f64", "sum_f64"), floats({1e20, -1e20, 600}));
  CHECK(fp.kind == VerdictKind::non_deterministic);
  CHECK(fp.observed == floats({0, 600}));

  const auto tree = oracle_tree_reduce(op("sub_i64"), ints({1, 2, 3}));
  CHECK(tree.kind == VerdictKind::non_deterministic);
  REQUIRE(tree.counterexample);
  CHECK(replays(Subject::of(Combinator::tree_reduce, op("sub_i64")), *tree.counterexample));

  std::vector<Value> ps = {Value::pair(S("a"), I(1)), Value::pair(S("b"), I(2)), Value::pair(S("a"), I(3))};
  CHECK(oracle_reduce_by_key(op("sum_i64"), ps).kind == VerdictKind::deterministic);
  const auto byk = oracle_reduce_by_key(op("sub_i64"), ps);
  CHECK(byk.kind == VerdictKind::non_deterministic);
  REQUIRE(byk.counterexample);
  CHECK(byk.counterexample->key == S("a"));

  CHECK_THROWS_AS(oracle_reduce(op("max_i64"), {}), Error);
  CHECK_THROWS_AS(oracle_reduce_by_key(op("max_i64"), ints({1})), Error);
}

TEST_CASE("oracle beyond the cap samples") {
  CheckOptions o;
  o.cap = 3;
  o.sample_trials = 200;
  const auto det = oracle_aggregate(triple(I(0), "sum_i64", "sum_i64"), ints({1, 2, 3, 4, 5}), o);
  CHECK(det.kind == VerdictKind::unknown);
  CHECK(det.cause == "sampled");
  const auto bad = oracle_reduce(op("sub_i64"), ints({1, 2, 3, 4, 5}), o);
  CHECK(bad.kind == VerdictKind::non_deterministic);
  REQUIRE(bad.counterexample);
  CHECK(replays(Subject::of(Combinator::reduce, op("sub_i64")), *bad.counterexample));
}

TEST_CASE("property: oracle counterexamples replay") {
  ChaosSource s(404);
  const char* combs[] = {"sub_i64", "max_i64", "sum_i64"};
  for (int i = 0; i < 60; ++i) {
    auto xs = testv::random_ints(s, 5, -3, 3);
    if (xs.empty()) xs.push_back(I(1));
    const auto subject = Subject::of(i % 2 ? Combinator::reduce : Combinator::tree_reduce, op(combs[i % 3]));
    const auto v = oracle(subject, xs);
    if (v.kind != VerdictKind::non_deterministic) continue;
    REQUIRE(v.counterexample);
    CHECK(replays(subject, *v.counterexample));
  }
}

TEST_CASE("property: shrinking keeps the discrepancy") {
  ChaosSource s(77);
  const auto subject = Subject::of(Combinator::aggregate, triple(F(0), "sum_f64", "sum_f64"));
  int shrunk = 0;
  for (int i = 0; i < 25; ++i) {
    auto xs = testv::random_floats(s, 5);
    if (oracle(subject, xs).kind != VerdictKind::non_deterministic) continue;
    const auto small = shrink_input(subject, xs);
    CHECK(small.size() <= xs.size());
    CHECK(oracle(subject, small).kind == VerdictKind::non_deterministic);
    ++shrunk;
  }
  CHECK(shrunk > 0);

  const auto sub = Subject::of(Combinator::reduce, op("sub_i64"));
  CHECK(shrink_input(sub, ints({40, 7, 9, 3})) == ints({0, 1}));
}

TEST_CASE("property: enlarging the domain keeps nonDeterministic") {
  CheckOptions o;
  o.max_level = 3;
  const char* ops[] = {"sum_i64", "sub_i64", "max_i64"};
  for (auto seq : ops) {
    for (auto comb : ops) {
      const auto t = triple(I(0), seq, comb);
      const auto small = check_aggregate(t, Domain::int_range(0, 1), o);
      if (small.kind != VerdictKind::non_deterministic) continue;
      CHECK(check_aggregate(t, Domain::int_range(-1, 2), o).kind == VerdictKind::non_deterministic);
      CHECK(check_aggregate(t, Domain::int_range(-3, 3), o).kind == VerdictKind::non_deterministic);
    }
  }
}

TEST_CASE("property: condition counterexamples replay") {
  const auto dom = Domain::int_range(-2, 2);
  const char* ops[] = {"sum_i64", "sub_i64", "max_i64", "min_i64"};
  for (auto seq : ops) {
    for (auto comb : ops) {
      const auto s = Subject::of(Combinator::aggregate, triple(I(0), seq, comb));
      const auto v = check(s, dom);
      CHECK(v.kind != VerdictKind::unknown);
      if (v.kind == VerdictKind::non_deterministic) {
        REQUIRE(v.counterexample);
        CHECK(replays(s, *v.counterexample));
      }
    }
  }
}

TEST_CASE("cross validation agrees on small domains") {
  const auto dom = Domain::int_range(-1, 1);
  const char* ops[] = {"sum_i64", "sub_i64", "max_i64"};
  for (auto seq : ops) {
    for (auto comb : ops) {
      for (auto c : {Combinator::aggregate, Combinator::tree_aggregate, Combinator::aggregate_by_key}) {
        const auto r = cross_validate(Subject::of(c, triple(I(0), seq, comb)), dom, 3);
        CHECK_MESSAGE(r.agree(), seq << "/" << comb << " " << to_string(c));
        CHECK(r.lists > 0);
      }
    }
    for (auto c : {Combinator::reduce, Combinator::tree_reduce, Combinator::reduce_by_key}) {
      const auto r = cross_validate(Subject::of(c, op(seq)), dom, 3);
      CHECK_MESSAGE(r.agree(), seq << " " << to_string(c));
    }
  }
}

TEST_CASE("subjects and names") {
  CHECK(parse_combinator("treeAggregate") == Combinator::tree_aggregate);
  CHECK(parse_combinator("reduce_by_key") == Combinator::reduce_by_key);
  CHECK_FALSE(parse_combinator("fold"));
  CHECK_THROWS_AS(Subject::of(Combinator::aggregate, op("sum_i64")), Error);
  CHECK_THROWS_AS(Subject::of(Combinator::reduce, triple(I(0), "sum_i64", "sum_i64")), Error);
  CHECK(to_string(VerdictKind::non_deterministic) == "nonDeterministic");
}
