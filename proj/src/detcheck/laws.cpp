#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "sparkdet/detcheck.hpp"

namespace sparkdet {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max() / 8;

// Candidate arguments for one position of a law, each with the length of
// its shortest generating list.
struct Pool {
  std::vector<Value> values;
  std::vector<std::size_t> levels;
  std::vector<bool> sampled;  // came from the sort sample, not the closure

  // Indices ordered by level, and how many have level <= k.
  std::vector<std::size_t> by_level;
  std::size_t eligible(std::size_t rem) const {
    std::size_t n = 0;
    while (n < by_level.size() && levels[by_level[n]] <= rem) ++n;
    return n;
  }
  void index() {
    by_level.resize(values.size());
    for (std::size_t i = 0; i < by_level.size(); ++i) by_level[i] = i;
    std::stable_sort(by_level.begin(), by_level.end(),
                     [&](auto a, auto b) { return levels[a] < levels[b]; });
  }
};

// Shortlex: shorter generating lists first, then by value.
Pool closure_pool(const AccumulatorSet& acc) {
  std::vector<std::size_t> order(acc.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return acc.levels[a] < acc.levels[b]; });
  Pool p;
  for (auto i : order) {
    p.values.push_back(acc.values[i]);
    p.levels.push_back(acc.levels[i]);
  }
  p.sampled.assign(p.values.size(), false);
  p.index();
  return p;
}

Pool domain_pool(const Domain& dom) {
  Pool p;
  p.values = dom.elements;
  std::sort(p.values.begin(), p.values.end());
  p.levels.assign(p.values.size(), 1);
  p.sampled.assign(p.values.size(), false);
  p.index();
  return p;
}

// Closure values plus the sort sample, no level constraint.
Pool widened_pool(const AccumulatorSet& acc, const std::vector<Value>& sample) {
  Pool p;
  p.values = acc.values;
  for (const auto& v : sample) {
    if (!acc.index_of(v)) p.values.push_back(v);
  }
  std::sort(p.values.begin(), p.values.end());
  p.levels.assign(p.values.size(), 0);
  for (const auto& v : p.values) p.sampled.push_back(!acc.index_of(v).has_value());
  p.index();
  return p;
}

// Returns both sides of the equation when the instance is violated.
using Instance = std::function<std::optional<std::vector<Value>>(const std::vector<Value>&)>;

struct Search {
  std::vector<const Pool*> pools;
  std::size_t bound = kUnbounded;
  // Only tuples with at least one sort-sample argument (the closure pass
  // already covered the rest).
  bool needs_sampled = false;
};

std::size_t count_tuples(const Search& s, std::size_t pos, std::size_t rem,
                         std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo) {
  if (pos == s.pools.size()) return 1;
  auto key = std::make_pair(pos, rem);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::size_t total = 0;
  const Pool& p = *s.pools[pos];
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.levels[i] > rem) continue;
    total += count_tuples(s, pos + 1, rem - p.levels[i], memo);
    if (total > std::numeric_limits<std::size_t>::max() / 4) break;
  }
  memo[key] = total;
  return total;
}

struct Found {
  std::vector<Value> witness;
  std::vector<Value> sides;
  bool sampled_arg = false;
};

bool walk(const Search& s, const Instance& law, std::size_t pos, std::size_t rem,
          std::vector<Value>& tuple, bool any_sampled, std::size_t& evals, std::optional<Found>& out) {
  if (pos == s.pools.size()) {
    if (s.needs_sampled && !any_sampled) return false;
    ++evals;
    if (auto sides = law(tuple)) {
      out = Found{tuple, *sides, any_sampled};
      return true;
    }
    return false;
  }
  const Pool& p = *s.pools[pos];
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.levels[i] > rem) continue;
    tuple.push_back(p.values[i]);
    const bool stop = walk(s, law, pos + 1, rem - p.levels[i], tuple, any_sampled || p.sampled[i],
                           evals, out);
    tuple.pop_back();
    if (stop) return true;
  }
  return false;
}

struct Outcome {
  LawStatus status = LawStatus::holds;
  std::optional<Found> found;
  std::size_t evaluations = 0;
  bool sampled = false;
};

Outcome search(const Search& s, const Instance& law, const CheckOptions& opts, std::uint64_t stream) {
  Outcome o;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  const auto total = count_tuples(s, 0, s.bound, memo);
  if (total <= opts.budget) {
    std::vector<Value> tuple;
    walk(s, law, 0, s.bound, tuple, false, o.evaluations, o.found);
    if (o.found) o.status = LawStatus::violated;
    return o;
  }
  // Too many instances: seeded random probing, inconclusive unless it hits.
  o.sampled = true;
  ChaosSource chaos = ChaosSource(opts.seed).derive(stream);
  for (std::size_t k = 0; k < opts.budget; ++k) {
    std::vector<Value> tuple;
    std::size_t rem = s.bound;
    bool any_sampled = false;
    bool ok = true;
    for (const Pool* p : s.pools) {
      const auto n = p->eligible(rem);
      if (n == 0) {
        ok = false;
        break;
      }
      const auto i = p->by_level[chaos.uniform(n)];
      tuple.push_back(p->values[i]);
      rem -= p->levels[i];
      any_sampled = any_sampled || p->sampled[i];
    }
    if (!ok || (s.needs_sampled && !any_sampled)) continue;
    ++o.evaluations;
    if (auto sides = law(tuple)) {
      o.found = Found{tuple, *sides, any_sampled};
      o.status = LawStatus::violated;
      return o;
    }
  }
  o.status = LawStatus::unknown;
  return o;
}

// Closure pass, then the sort-sample pass when the first found nothing.
LawReport run_law(Law law, const Instance& closure_instance, const Instance& sample_instance,
                  const Search& closure_search, const std::optional<Search>& sample_search,
                  const CheckOptions& opts) {
  LawReport r;
  r.law = law;
  const auto stream = static_cast<std::uint64_t>(law) * 2;
  auto o = search(closure_search, closure_instance, opts, stream);
  r.evaluations = o.evaluations;
  r.sampled = o.sampled;
  r.status = o.status;
  if (o.found) {
    r.witness = o.found->witness;
    r.sides = o.found->sides;
    return r;
  }
  if (!sample_search) return r;
  auto w = search(*sample_search, sample_instance, opts, stream + 1);
  r.evaluations += w.evaluations;
  r.sampled = r.sampled || w.sampled;
  if (w.found) {
    r.status = LawStatus::violated;
    r.source = Approximation::sort_sample;
    r.witness = w.found->witness;
    r.sides = w.found->sides;
  } else if (w.status == LawStatus::unknown && r.status == LawStatus::holds) {
    r.note = "sort sample too large to cover";
  }
  return r;
}

std::optional<std::vector<Value>> unequal(Value a, Value b) {
  if (a == b) return std::nullopt;
  return std::vector<Value>{std::move(a), std::move(b)};
}

std::size_t bound_of(const AccumulatorSet& acc) { return acc.closed ? kUnbounded : acc.level_bound; }

}  // namespace

std::vector<LawReport> check_monoid_laws(const Operator& comb, const Value& zero,
                                         const AccumulatorSet& acc, const Domain& dom,
                                         const CheckOptions& opts) {
  const Pool cp = closure_pool(acc);
  std::optional<Pool> wp;
  if (opts.sort_sample) {
    wp = widened_pool(acc, sort_sample(zero, dom));
    if (std::none_of(wp->sampled.begin(), wp->sampled.end(), [](bool b) { return b; })) wp.reset();
  }
  auto closure_search = [&](std::size_t arity) {
    return Search{std::vector<const Pool*>(arity, &cp), bound_of(acc), false};
  };
  auto sample_search = [&](std::size_t arity) -> std::optional<Search> {
    if (!wp) return std::nullopt;
    return Search{std::vector<const Pool*>(arity, &*wp), kUnbounded, true};
  };

  std::vector<LawReport> out;

  // Closure: inside the image the result must be an image value too; on the
  // sort sample only evaluation is checked.
  const Instance closed = [&](const std::vector<Value>& t) -> std::optional<std::vector<Value>> {
    Value r = comb(t[0], t[1]);
    if (acc.index_of(r)) return std::nullopt;
    return std::vector<Value>{r};
  };
  const Instance evaluates = [&](const std::vector<Value>& t) -> std::optional<std::vector<Value>> {
    Value r = comb(t[0], t[1]);
    if (admits(comb.out_sort(), r)) return std::nullopt;
    return std::vector<Value>{r};
  };
  out.push_back(run_law(Law::closure, closed, evaluates, closure_search(2), sample_search(2), opts));

  const Instance identity = [&](const std::vector<Value>& t) -> std::optional<std::vector<Value>> {
    if (auto s = unequal(comb(zero, t[0]), t[0])) return s;
    return unequal(comb(t[0], zero), t[0]);
  };
  out.push_back(run_law(Law::identity, identity, identity, closure_search(1), sample_search(1), opts));

  const Instance commutes = [&](const std::vector<Value>& t) {
    return unequal(comb(t[0], t[1]), comb(t[1], t[0]));
  };
  out.push_back(
      run_law(Law::commutativity, commutes, commutes, closure_search(2), sample_search(2), opts));

  const Instance associates = [&](const std::vector<Value>& t) {
    return unequal(comb(comb(t[0], t[1]), t[2]), comb(t[0], comb(t[1], t[2])));
  };
  out.push_back(
      run_law(Law::associativity, associates, associates, closure_search(3), sample_search(3), opts));
  return out;
}

LawReport check_homomorphism(const OperatorTriple& t, const AccumulatorSet& acc, const Domain& dom,
                             const CheckOptions& opts) {
  const Pool cp = closure_pool(acc);
  const Pool dp = domain_pool(dom);
  std::optional<Pool> wp;
  if (opts.sort_sample) {
    wp = widened_pool(acc, sort_sample(t.zero, dom));
    if (std::none_of(wp->sampled.begin(), wp->sampled.end(), [](bool b) { return b; })) wp.reset();
  }
  // The domain argument is not sampled; mark it so the second pass only
  // looks at sampled accumulators.
  const Instance hom = [&](const std::vector<Value>& x) {
    return unequal(t.seq(x[0], x[1]), t.comb(x[0], t.seq(t.zero, x[1])));
  };
  Search cs{{&cp, &dp}, bound_of(acc), false};
  std::optional<Search> ss;
  if (wp) ss = Search{{&*wp, &dp}, kUnbounded, true};
  return run_law(Law::homomorphism, hom, hom, cs, ss, opts);
}

std::vector<LawReport> check_semigroup_laws(const Operator& comb, const AccumulatorSet& acc,
                                            const Domain& dom, const CheckOptions& opts) {
  const Pool cp = closure_pool(acc);
  std::optional<Pool> wp;
  if (opts.sort_sample && !dom.elements.empty()) {
    wp = widened_pool(acc, sort_sample(dom.elements.front(), dom));
    if (std::none_of(wp->sampled.begin(), wp->sampled.end(), [](bool b) { return b; })) wp.reset();
  }
  auto closure_search = [&](std::size_t arity) {
    return Search{std::vector<const Pool*>(arity, &cp), bound_of(acc), false};
  };
  auto sample_search = [&](std::size_t arity) -> std::optional<Search> {
    if (!wp) return std::nullopt;
    return Search{std::vector<const Pool*>(arity, &*wp), kUnbounded, true};
  };

  std::vector<LawReport> out;
  const Instance closed = [&](const std::vector<Value>& t) -> std::optional<std::vector<Value>> {
    Value r = comb(t[0], t[1]);
    if (acc.index_of(r)) return std::nullopt;
    return std::vector<Value>{r};
  };
  const Instance evaluates = [&](const std::vector<Value>& t) -> std::optional<std::vector<Value>> {
    Value r = comb(t[0], t[1]);
    if (admits(comb.out_sort(), r)) return std::nullopt;
    return std::vector<Value>{r};
  };
  out.push_back(run_law(Law::closure, closed, evaluates, closure_search(2), sample_search(2), opts));
  const Instance commutes = [&](const std::vector<Value>& t) {
    return unequal(comb(t[0], t[1]), comb(t[1], t[0]));
  };
  out.push_back(
      run_law(Law::commutativity, commutes, commutes, closure_search(2), sample_search(2), opts));
  const Instance associates = [&](const std::vector<Value>& t) {
    return unequal(comb(comb(t[0], t[1]), t[2]), comb(t[0], comb(t[1], t[2])));
  };
  out.push_back(
      run_law(Law::associativity, associates, associates, closure_search(3), sample_search(3), opts));
  return out;
}

}  // namespace sparkdet
