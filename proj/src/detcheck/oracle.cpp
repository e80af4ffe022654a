#include <algorithm>
#include <set>

#include "internal.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet {

namespace detail {

bool allows_empty_blocks(Combinator c) {
  return c == Combinator::aggregate || c == Combinator::tree_aggregate;
}

bool uses_plans(Combinator c) { return c == Combinator::tree_aggregate || c == Combinator::tree_reduce; }

namespace {

PairRdd to_pairs(const Rdd& rdd) {
  PairRdd out;
  out.reserve(rdd.size());
  for (const auto& part : rdd) {
    PairPartition p;
    p.reserve(part.size());
    for (const auto& v : part) p.emplace_back(v.first(), v.second());
    out.push_back(std::move(p));
  }
  return out;
}

Value sorted_map(std::vector<Value> pairs) {
  std::sort(pairs.begin(), pairs.end());
  return Value::list(std::move(pairs));
}

Value by_key_result(const PairRdd& prdd) {
  std::vector<Value> pairs;
  for (const auto& part : prdd) {
    for (const auto& [k, v] : part) pairs.push_back(Value::pair(k, v));
  }
  return sorted_map(std::move(pairs));
}

// Visits the compositions of one ordering, with optional single empty blocks.
bool visit_blocks(const std::vector<Value>& ordering, bool allow_empty,
                  const std::function<bool(const Rdd&)>& visit) {
  const std::size_t n = ordering.size();
  if (n == 0) {
    if (visit(Rdd{})) return true;
    return allow_empty && visit(Rdd{Partition{}});
  }
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    Rdd rdd;
    Partition cur;
    for (std::size_t i = 0; i < n; ++i) {
      cur.push_back(ordering[i]);
      if (i + 1 == n || (mask >> i) & 1u) {
        rdd.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (visit(rdd)) return true;
    if (!allow_empty) continue;
    for (std::size_t at = 0; at <= rdd.size(); ++at) {
      Rdd with = rdd;
      with.insert(with.begin() + static_cast<std::ptrdiff_t>(at), Partition{});
      if (visit(with)) return true;
    }
  }
  return false;
}

}  // namespace

bool for_each_execution(const Subject& s, const std::vector<Value>& xs,
                        const std::function<bool(const Execution&)>& visit) {
  const bool empties = allows_empty_blocks(s.combinator);
  const bool plans = uses_plans(s.combinator);
  auto on_rdd = [&](const Rdd& rdd) {
    if (!plans) return visit(Execution{false, rdd, std::nullopt});
    if (rdd.empty()) return false;
    ReductionOrderEnumerator it(rdd.size(), std::max(rdd.size(), kDefaultEnumerationCap));
    while (auto plan = it.next()) {
      if (visit(Execution{false, rdd, std::move(plan)})) return true;
    }
    return false;
  };
  auto ordering = xs;
  std::sort(ordering.begin(), ordering.end());
  do {
    if (visit_blocks(ordering, empties, on_rdd)) return true;
  } while (std::next_permutation(ordering.begin(), ordering.end()));
  // Two empty partitions are the only way a tree reduction sees zero twice.
  if (xs.empty() && s.combinator == Combinator::tree_aggregate) {
    if (on_rdd(Rdd{Partition{}, Partition{}})) return true;
  }
  return false;
}

Value reference(const Subject& s, const std::vector<Value>& xs) {
  if (!is_by_key(s.combinator)) {
    if (is_reduce_family(s.combinator)) return reducel_ref(s.comb, xs);
    return foldl_ref(s.seq, s.zero, xs);
  }
  std::vector<Value> keys;
  for (const auto& v : xs) {
    if (std::find(keys.begin(), keys.end(), v.first()) == keys.end()) keys.push_back(v.first());
  }
  std::vector<Value> pairs;
  for (const auto& k : keys) {
    std::vector<Value> vals;
    for (const auto& v : xs) {
      if (v.first() == k) vals.push_back(v.second());
    }
    pairs.push_back(Value::pair(k, s.combinator == Combinator::aggregate_by_key
                                       ? foldl_ref(s.seq, s.zero, vals)
                                       : reducel_ref(s.comb, vals)));
  }
  return sorted_map(std::move(pairs));
}

bool multiset_deterministic(const Subject& s, const std::vector<Value>& xs, std::size_t& executions) {
  auto ordering = xs;
  std::sort(ordering.begin(), ordering.end());
  const Value first = reference(s, ordering);
  while (std::next_permutation(ordering.begin(), ordering.end())) {
    if (!(reference(s, ordering) == first)) return false;
  }
  const bool stopped = for_each_execution(s, xs, [&](const Execution& e) {
    ++executions;
    return !(run_execution(s, xs, e) == first);
  });
  return !stopped;
}

Verdict oracle_unguarded(const Subject& s, const std::vector<Value>& xs, const CheckOptions& opts) {
  if (is_by_key(s.combinator)) {
    for (const auto& v : xs) {
      if (!v.is(Kind::Pair)) {
        throw Error(Errc::invalid_argument, "by-key input must be (key, value) pairs, got " +
                                                v.to_string());
      }
    }
  } else if (is_reduce_family(s.combinator) && xs.empty()) {
    throw Error(Errc::empty_list, std::string(to_string(s.combinator)) + " of an empty list");
  }

  Verdict v;
  v.method = Method::oracle;
  v.combinator = s.combinator;
  v.domain = to_string(std::span<const Value>(xs));
  v.kind = VerdictKind::deterministic;

  const Value ref = reference(s, xs);
  const Execution seq{true, {}, std::nullopt};
  std::set<Value> observed{ref};
  std::optional<std::pair<Execution, Value>> first;
  std::optional<std::pair<Execution, Value>> differing;

  auto consider = [&](const Execution& e) {
    ++v.executions;
    Value out = run_execution(s, xs, e);
    observed.insert(out);
    if (!first) first.emplace(e, out);
    if (!differing && !(out == ref)) differing.emplace(e, std::move(out));
  };

  if (xs.size() <= opts.cap) {
    for_each_execution(s, xs, [&](const Execution& e) {
      consider(e);
      return false;
    });
  } else {
    ChaosSource chaos(opts.seed);
    const bool empties = allows_empty_blocks(s.combinator);
    for (std::size_t k = 0; k < opts.sample_trials && !differing; ++k) {
      Rdd rdd = random_partitioning(chaos, xs.size()).apply(xs);
      if (empties && chaos.uniform(2) == 1) {
        rdd.insert(rdd.begin() + static_cast<std::ptrdiff_t>(chaos.uniform(rdd.size() + 1)),
                   Partition{});
      }
      Execution e{false, std::move(rdd), std::nullopt};
      if (uses_plans(s.combinator)) e.plan = random_plan(chaos, e.rdd.size());
      consider(e);
    }
    if (!differing) {
      v.kind = VerdictKind::unknown;
      v.cause = "sampled";
    }
  }

  v.observed.assign(observed.begin(), observed.end());
  if (!differing) return v;

  v.kind = VerdictKind::non_deterministic;
  Counterexample cx;
  cx.input = xs;
  cx.right = differing->first;
  cx.right_output = differing->second;
  if (first && !(first->second == cx.right_output)) {
    cx.left = first->first;
    cx.left_output = first->second;
  } else {
    cx.left = seq;
    cx.left_output = ref;
  }
  if (is_by_key(s.combinator)) {
    const auto l = cx.left_output.items();
    const auto r = cx.right_output.items();
    for (std::size_t i = 0; i < std::min(l.size(), r.size()); ++i) {
      if (!(l[i] == r[i])) {
        cx.key = l[i].first();
        break;
      }
    }
  }
  v.counterexample = std::move(cx);
  return v;
}

}  // namespace detail

Value run_execution(const Subject& s, const std::vector<Value>& input, const Execution& e) {
  if (e.sequential) return detail::reference(s, input);
  const auto t = s.triple();
  switch (s.combinator) {
    case Combinator::aggregate: return aggregate_dt(t, e.rdd);
    case Combinator::reduce: return reduce_dt(s.comb, e.rdd);
    case Combinator::tree_aggregate:
      return tree_aggregate_bt(e.plan.value_or(ReductionPlan{}), t, e.rdd);
    case Combinator::tree_reduce: return tree_reduce_bt(e.plan.value_or(ReductionPlan{}), s.comb, e.rdd);
    case Combinator::aggregate_by_key:
      return detail::by_key_result(aggregate_by_key_dt(t, detail::to_pairs(e.rdd)));
    case Combinator::reduce_by_key:
    case Combinator::aggregate_messages:
      return detail::by_key_result(reduce_by_key_dt(s.comb, detail::to_pairs(e.rdd)));
  }
  throw Error(Errc::invalid_argument, "unknown combinator");
}

bool replays(const Subject& s, const Counterexample& cx) {
  return !(run_execution(s, cx.input, cx.left) == run_execution(s, cx.input, cx.right));
}

Verdict oracle(const Subject& s, const std::vector<Value>& xs, const CheckOptions& opts) {
  try {
    return detail::oracle_unguarded(s, xs, opts);
  } catch (const Error& e) {
    if (e.code() != Errc::operator_failure) throw;
    Verdict v;
    v.method = Method::oracle;
    v.combinator = s.combinator;
    v.domain = to_string(std::span<const Value>(xs));
    v.kind = VerdictKind::unknown;
    v.cause = "operator_error";
    v.warnings.push_back(e.what());
    return v;
  }
}

Verdict oracle_aggregate(const OperatorTriple& t, const std::vector<Value>& xs,
                         const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::aggregate, t), xs, opts);
}
Verdict oracle_reduce(const Operator& comb, const std::vector<Value>& xs, const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::reduce, comb), xs, opts);
}
Verdict oracle_tree_aggregate(const OperatorTriple& t, const std::vector<Value>& xs,
                              const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::tree_aggregate, t), xs, opts);
}
Verdict oracle_tree_reduce(const Operator& comb, const std::vector<Value>& xs,
                           const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::tree_reduce, comb), xs, opts);
}
Verdict oracle_aggregate_by_key(const OperatorTriple& t, const std::vector<Value>& pairs,
                                const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::aggregate_by_key, t), pairs, opts);
}
Verdict oracle_reduce_by_key(const Operator& merge_value, const std::vector<Value>& pairs,
                             const CheckOptions& opts) {
  return oracle(Subject::of(Combinator::reduce_by_key, merge_value), pairs, opts);
}

}  // namespace sparkdet
