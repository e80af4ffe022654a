#include <algorithm>

#include "internal.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

// Lists the witness could come from: concatenations of the generating lists
// of its arguments, shortest first.
std::vector<std::vector<Value>> candidate_lists(const std::vector<std::vector<Value>>& parts) {
  std::vector<std::vector<Value>> out;
  const std::size_t k = parts.size();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<Value> xs;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1u) xs.insert(xs.end(), parts[i].begin(), parts[i].end());
    }
    out.push_back(std::move(xs));
  }
  if (k == 0) out.emplace_back();
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Value> as_input(const Subject& s, const std::vector<Value>& values, const CheckOptions& opts) {
  if (!is_by_key(s.combinator)) return values;
  const Value key = opts.keys.empty() ? Value::string("a") : opts.keys.front();
  std::vector<Value> pairs;
  for (const auto& v : values) pairs.push_back(Value::pair(key, v));
  return pairs;
}

// Greedy element removal; keeps the witness values themselves.
std::vector<Value> drop_elements(const Subject& s, std::vector<Value> xs, const CheckOptions& opts) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto ys = xs;
      ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(i));
      if (is_reduce_family(s.combinator) && !is_by_key(s.combinator) && ys.empty()) continue;
      if (detail::oracle_unguarded(s, ys, opts).kind == VerdictKind::non_deterministic) {
        xs = std::move(ys);
        changed = true;
        break;
      }
    }
  }
  return xs;
}

std::optional<Counterexample> realize(const Subject& s, const LawReport& law, const AccumulatorSet& acc,
                                      const CheckOptions& opts) {
  std::vector<std::vector<Value>> parts;
  for (std::size_t i = 0; i < law.witness.size(); ++i) {
    const auto& w = law.witness[i];
    if (law.law == Law::homomorphism && i == 1) {
      parts.push_back({w});
    } else if (auto idx = acc.index_of(w)) {
      parts.push_back(acc.sources[*idx]);
    } else {
      return std::nullopt;
    }
  }
  for (const auto& values : candidate_lists(parts)) {
    if (is_reduce_family(s.combinator) && !is_by_key(s.combinator) && values.empty()) continue;
    auto xs = as_input(s, values, opts);
    if (xs.size() > opts.cap) continue;
    auto v = detail::oracle_unguarded(s, xs, opts);
    if (v.kind != VerdictKind::non_deterministic) continue;
    auto small = drop_elements(s, xs, opts);
    if (small.size() < xs.size()) v = detail::oracle_unguarded(s, small, opts);
    return v.counterexample;
  }
  return std::nullopt;
}

// Warns when comb returns one of its arguments on every pair of the set.
std::optional<std::string> ignored_argument(const Operator& comb, const AccumulatorSet& acc) {
  if (acc.values.size() < 2) return std::nullopt;
  const std::size_t n = std::min<std::size_t>(acc.values.size(), 64);
  bool keeps_left = true;
  bool keeps_right = true;
  for (std::size_t i = 0; i < n && (keeps_left || keeps_right); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Value r = comb(acc.values[i], acc.values[j]);
      keeps_left = keeps_left && r == acc.values[i];
      keeps_right = keeps_right && r == acc.values[j];
    }
  }
  if (keeps_left) return comb.name() + " ignores its right argument on the accumulator set";
  if (keeps_right) return comb.name() + " ignores its left argument on the accumulator set";
  return std::nullopt;
}

Verdict conditions(const Subject& s, const Domain& dom, const CheckOptions& opts) {
  Verdict v;
  v.method = Method::conditions;
  v.combinator = s.combinator;
  v.domain = dom.label;
  try {
    const bool reduce_family = is_reduce_family(s.combinator);
    const AccumulatorSet acc =
        reduce_family ? reduce_closure(s.comb, dom, opts) : accumulator_closure(s.triple(), dom, opts);
    v.level_bound = acc.level_bound;
    v.closed = acc.closed;
    if (reduce_family) {
      v.laws = check_semigroup_laws(s.comb, acc, dom, opts);
    } else {
      v.laws = check_monoid_laws(s.comb, s.zero, acc, dom, opts);
      v.laws.push_back(check_homomorphism(s.triple(), acc, dom, opts));
    }
    if (auto w = ignored_argument(s.comb, acc)) v.warnings.push_back(*w);

    const LawReport* violated = nullptr;
    bool unknown = false;
    for (const auto& law : v.laws) {
      if (law.status == LawStatus::violated && law.source == Approximation::closure) {
        if (!violated) violated = &law;
      } else if (law.status == LawStatus::violated) {
        v.warnings.push_back(std::string(to_string(law.law)) + " fails on sort-sample values " +
                             to_string(std::span<const Value>(law.witness)) +
                             " outside the accumulator set");
      } else if (law.status == LawStatus::unknown) {
        unknown = true;
      }
    }
    if (violated) {
      v.counterexample = realize(s, *violated, acc, opts);
      if (v.counterexample) {
        v.kind = VerdictKind::non_deterministic;
      } else {
        v.kind = VerdictKind::unknown;
        v.cause = "unrealized_witness";
      }
    } else if (unknown) {
      v.kind = VerdictKind::unknown;
      v.cause = "budget";
    } else if (acc.truncated && acc.level_bound < opts.max_level) {
      v.kind = VerdictKind::unknown;
      v.cause = "truncated_closure";
    } else {
      v.kind = VerdictKind::deterministic;
    }
  } catch (const Error& e) {
    if (e.code() != Errc::operator_failure) throw;
    v.kind = VerdictKind::unknown;
    v.cause = "operator_error";
    v.warnings.push_back(e.what());
  }
  return v;
}

Verdict delegate(Verdict v, Combinator from, Combinator to) {
  v.combinator = from;
  v.delegated_to = to;
  return v;
}

}  // namespace

Verdict check_aggregate(const OperatorTriple& t, const Domain& dom, const CheckOptions& opts) {
  return conditions(Subject::of(Combinator::aggregate, t), dom, opts);
}

Verdict check_reduce(const Operator& comb, const Domain& dom, const CheckOptions& opts) {
  return conditions(Subject::of(Combinator::reduce, comb), dom, opts);
}

Verdict check_tree_aggregate(const OperatorTriple& t, const Domain& dom, const CheckOptions& opts) {
  return delegate(conditions(Subject::of(Combinator::tree_aggregate, t), dom, opts),
                  Combinator::tree_aggregate, Combinator::aggregate);
}

Verdict check_tree_reduce(const Operator& comb, const Domain& dom, const CheckOptions& opts) {
  return delegate(conditions(Subject::of(Combinator::tree_reduce, comb), dom, opts),
                  Combinator::tree_reduce, Combinator::reduce);
}

Verdict check_aggregate_by_key(const OperatorTriple& t, const Domain& dom, const CheckOptions& opts) {
  return delegate(conditions(Subject::of(Combinator::aggregate_by_key, t), dom, opts),
                  Combinator::aggregate_by_key, Combinator::aggregate);
}

Verdict check_reduce_by_key(const Operator& merge_value, const Domain& dom, const CheckOptions& opts) {
  return delegate(conditions(Subject::of(Combinator::reduce_by_key, merge_value), dom, opts),
                  Combinator::reduce_by_key, Combinator::reduce);
}

Verdict check_aggregate_messages(const Operator& merge_msg, const Domain& dom,
                                 const CheckOptions& opts) {
  auto v = check_reduce_by_key(merge_msg, dom, opts);
  v.combinator = Combinator::aggregate_messages;
  v.delegated_to = Combinator::reduce_by_key;
  if (v.kind != VerdictKind::deterministic) {
    // A failed sufficient condition says nothing about the graph computation.
    v.kind = VerdictKind::unknown;
    v.cause = "sufficient_condition_failed";
    v.counterexample.reset();
  }
  return v;
}

Verdict check(const Subject& s, const Domain& dom, const CheckOptions& opts) {
  switch (s.combinator) {
    case Combinator::aggregate: return check_aggregate(s.triple(), dom, opts);
    case Combinator::reduce: return check_reduce(s.comb, dom, opts);
    case Combinator::tree_aggregate: return check_tree_aggregate(s.triple(), dom, opts);
    case Combinator::tree_reduce: return check_tree_reduce(s.comb, dom, opts);
    case Combinator::aggregate_by_key: return check_aggregate_by_key(s.triple(), dom, opts);
    case Combinator::reduce_by_key: return check_reduce_by_key(s.comb, dom, opts);
    case Combinator::aggregate_messages: return check_aggregate_messages(s.comb, dom, opts);
  }
  throw Error(Errc::invalid_argument, "unknown combinator");
}

namespace {

// Calls visit on every multiset of size lo..hi over `universe` (as sorted
// index combinations); visit returns true to stop.
template <class Visit>
bool for_each_multiset(const std::vector<Value>& universe, std::size_t lo, std::size_t hi, Visit&& visit) {
  const std::size_t u = universe.size();
  for (std::size_t len = lo; len <= hi; ++len) {
    if (u == 0 && len > 0) break;
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      std::vector<Value> xs;
      xs.reserve(len);
      for (auto i : idx) xs.push_back(universe[i]);
      if (visit(xs)) return true;
      // Next non-decreasing index vector.
      std::size_t p = len;
      while (p > 0 && idx[p - 1] + 1 == u) --p;
      if (p == 0) break;
      ++idx[p - 1];
      for (std::size_t q = p; q < len; ++q) idx[q] = idx[p - 1];
    }
  }
  return false;
}

}  // namespace

AgreementReport cross_validate(const Subject& s, const Domain& dom, std::size_t max_len,
                               const CheckOptions& opts) {
  CheckOptions scoped = opts;
  scoped.max_level = max_len;
  scoped.cap = std::max(opts.cap, max_len);
  scoped.size_cap = std::max<std::size_t>(opts.size_cap, 1u << 16);

  AgreementReport r{s, dom.label, max_len, check(s, dom, scoped), VerdictKind::deterministic,
                    std::nullopt, 0, 0, false, {}};

  std::vector<Value> universe;
  if (is_by_key(s.combinator)) {
    for (const auto& k : opts.keys) {
      for (const auto& d : dom.elements) universe.push_back(Value::pair(k, d));
    }
  } else {
    universe = dom.elements;
  }
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  const std::size_t lo = is_reduce_family(s.combinator) && !is_by_key(s.combinator) ? 1 : 0;

  std::optional<std::vector<Value>> witness;
  try {
    for_each_multiset(universe, lo, max_len, [&](const std::vector<Value>& xs) {
      ++r.lists;
      if (detail::multiset_deterministic(s, xs, r.executions)) return false;
      witness = xs;
      return true;
    });
  } catch (const Error& e) {
    if (e.code() != Errc::operator_failure) throw;
    r.oracle = VerdictKind::unknown;
  }

  if (witness) {
    r.oracle = VerdictKind::non_deterministic;
    // Some ordering of the multiset shows the discrepancy on its own.
    auto ordering = *witness;
    do {
      auto v = detail::oracle_unguarded(s, ordering, scoped);
      if (v.counterexample) {
        r.oracle_counterexample = v.counterexample;
        break;
      }
    } while (std::next_permutation(ordering.begin(), ordering.end()));
  }

  r.abstained = r.conditions.kind == VerdictKind::unknown;
  if (r.conditions.kind != r.oracle) {
    Disagreement d{{}, r.conditions.kind, r.oracle};
    if (r.oracle_counterexample) {
      d.input = r.oracle_counterexample->input;
    } else if (r.conditions.counterexample) {
      d.input = r.conditions.counterexample->input;
    }
    r.disagreements.push_back(std::move(d));
  }
  return r;
}

}  // namespace sparkdet
