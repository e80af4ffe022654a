#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sparkdet/detcheck.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

struct CombinatorName {
  Combinator c;
  std::string_view camel;
  std::string_view snake;
};

constexpr CombinatorName kNames[] = {
    {Combinator::aggregate, "aggregate", "aggregate"},
    {Combinator::reduce, "reduce", "reduce"},
    {Combinator::tree_aggregate, "treeAggregate", "tree_aggregate"},
    {Combinator::tree_reduce, "treeReduce", "tree_reduce"},
    {Combinator::aggregate_by_key, "aggregateByKey", "aggregate_by_key"},
    {Combinator::reduce_by_key, "reduceByKey", "reduce_by_key"},
    {Combinator::aggregate_messages, "aggregateMessages", "aggregate_messages"},
};

// Level-by-level closure. `expand` maps one value and one domain element to
// the next value. Levels never exceed opts.max_level; a level that would
// push the set past opts.size_cap is dropped whole.
template <class Expand>
AccumulatorSet closure(std::vector<std::pair<Value, std::vector<Value>>> seeds, std::size_t seed_level,
                       const Domain& dom, const CheckOptions& opts, Expand&& expand) {
  std::map<Value, std::vector<Value>> found;
  std::vector<Value> frontier;
  for (auto& [v, src] : seeds) {
    if (found.emplace(v, src).second) frontier.push_back(v);
  }
  std::sort(frontier.begin(), frontier.end());

  AccumulatorSet acc;
  std::size_t level = seed_level;
  if (found.size() > opts.size_cap) {
    // Nothing sensible to keep; report an empty, truncated image.
    acc.truncated = true;
    acc.level_bound = seed_level == 0 ? 0 : seed_level - 1;
    return acc;
  }
  while (true) {
    if (frontier.empty()) {
      acc.closed = true;
      break;
    }
    if (level >= opts.max_level) break;
    std::map<Value, std::vector<Value>> next;
    for (const auto& v : frontier) {
      const auto& src = found.at(v);
      for (const auto& d : dom.elements) {
        Value w = expand(v, d);
        if (found.count(w) || next.count(w)) continue;
        auto s = src;
        s.push_back(d);
        next.emplace(std::move(w), std::move(s));
      }
    }
    if (found.size() + next.size() > opts.size_cap) {
      acc.truncated = true;
      break;
    }
    ++level;
    frontier.clear();
    for (auto& [v, s] : next) {
      frontier.push_back(v);
      found.emplace(v, std::move(s));
    }
  }
  acc.level_bound = level;
  for (auto& [v, s] : found) {
    acc.values.push_back(v);
    acc.levels.push_back(s.size());
    acc.sources.push_back(std::move(s));
  }
  return acc;
}

void add_unique(std::vector<Value>& out, Value v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
}

// Scalars standing in for collection elements: the items of collection-valued
// domain elements, or the elements themselves.
std::vector<Value> atoms_of(const Domain& dom) {
  std::vector<Value> atoms;
  for (const auto& d : dom.elements) {
    if (d.is(Kind::List) || d.is(Kind::Set)) {
      for (const auto& x : d.items()) add_unique(atoms, x);
    } else {
      add_unique(atoms, d);
    }
    if (atoms.size() >= 2) break;
  }
  if (atoms.empty()) atoms.push_back(Value::integer(1));
  if (atoms.size() == 1) atoms.push_back(Value::integer(2));
  return atoms;
}

}  // namespace

std::string_view to_string(Combinator c) {
  for (const auto& n : kNames) {
    if (n.c == c) return n.camel;
  }
  return "?";
}

std::optional<Combinator> parse_combinator(std::string_view name) {
  for (const auto& n : kNames) {
    if (name == n.camel || name == n.snake) return n.c;
  }
  return std::nullopt;
}

bool is_reduce_family(Combinator c) {
  return c == Combinator::reduce || c == Combinator::tree_reduce || c == Combinator::reduce_by_key ||
         c == Combinator::aggregate_messages;
}

bool is_by_key(Combinator c) {
  return c == Combinator::aggregate_by_key || c == Combinator::reduce_by_key ||
         c == Combinator::aggregate_messages;
}

Subject Subject::of(Combinator c, const OperatorTriple& t) {
  if (is_reduce_family(c)) {
    throw Error(Errc::invalid_argument, std::string(to_string(c)) + " takes a single operator");
  }
  t.validate();
  return Subject{c, t.zero, t.seq, t.comb};
}

Subject Subject::of(Combinator c, const Operator& comb) {
  if (!is_reduce_family(c)) {
    throw Error(Errc::invalid_argument, std::string(to_string(c)) + " takes a zero, seq and comb");
  }
  if (comb.arity() != 2) {
    throw Error(Errc::sort_mismatch, "operator " + comb.name() + " is not binary");
  }
  return Subject{c, Value::none(), comb, comb};
}

Domain Domain::int_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error(Errc::invalid_argument, "empty integer range");
  if (hi - lo > 100'000) throw Error(Errc::cap_exceeded, "integer range too large");
  Domain d;
  for (auto i = lo; i <= hi; ++i) d.elements.push_back(Value::integer(i));
  d.label = std::to_string(lo) + ".." + std::to_string(hi);
  return d;
}

Domain Domain::of(std::vector<Value> elements, std::string label) {
  Domain d;
  for (auto& v : elements) add_unique(d.elements, std::move(v));
  d.label = label.empty() ? to_string(std::span<const Value>(d.elements)) : std::move(label);
  return d;
}

std::optional<std::size_t> AccumulatorSet::index_of(const Value& v) const {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || !(*it == v)) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

AccumulatorSet accumulator_closure(const OperatorTriple& t, const Domain& dom,
                                   const CheckOptions& opts) {
  return closure({{t.zero, {}}}, 0, dom, opts,
                 [&](const Value& acc, const Value& d) { return t.seq(acc, d); });
}

AccumulatorSet reduce_closure(const Operator& comb, const Domain& dom, const CheckOptions& opts) {
  std::vector<std::pair<Value, std::vector<Value>>> seeds;
  for (const auto& d : dom.elements) seeds.push_back({d, {d}});
  if (opts.max_level == 0) {
    AccumulatorSet acc;
    return acc;
  }
  return closure(std::move(seeds), 1, dom, opts,
                 [&](const Value& acc, const Value& d) { return comb(acc, d); });
}

std::vector<Value> sort_sample(const Value& like, const Domain& dom) {
  using L = std::numeric_limits<double>;
  std::vector<Value> out;
  switch (like.kind()) {
    case Kind::Int:
      for (std::int64_t v : {std::int64_t{0}, std::int64_t{1}, std::int64_t{-1}, std::int64_t{2},
                             std::int64_t{7}, std::numeric_limits<std::int64_t>::max(),
                             std::numeric_limits<std::int64_t>::min()}) {
        out.push_back(Value::integer(v));
      }
      break;
    case Kind::Float:
      for (double v : {0.0, -0.0, 1.0, -1.0, 2.0, 0.5, 600.0, 1e20, -1e20, L::infinity(),
                       -L::infinity(), L::quiet_NaN()}) {
        out.push_back(Value::real(v));
      }
      break;
    case Kind::Bool:
      out = {Value::boolean(false), Value::boolean(true)};
      break;
    case Kind::Str:
      out = {Value::string(""), Value::string("a"), Value::string("b")};
      break;
    case Kind::List: {
      const auto a = atoms_of(dom);
      out = {Value::list({}), Value::list({a[0]}), Value::list({a[0], a[1]}),
             Value::list({a[1], a[0]})};
      break;
    }
    case Kind::Set: {
      const auto a = atoms_of(dom);
      out = {Value::set({}), Value::set({a[0]}), Value::set({a[1]}), Value::set({a[0], a[1]})};
      break;
    }
    case Kind::Pair: {
      auto firsts = sort_sample(like.first(), dom);
      auto seconds = sort_sample(like.second(), dom);
      firsts.resize(std::min<std::size_t>(firsts.size(), 3));
      seconds.resize(std::min<std::size_t>(seconds.size(), 3));
      for (const auto& x : firsts) {
        for (const auto& y : seconds) out.push_back(Value::pair(x, y));
      }
      break;
    }
    case Kind::Opt: {
      out.push_back(Value::none());
      const Value inner = like.is_some() ? like.unwrap()
                          : dom.elements.empty() ? Value::integer(0)
                                                 : dom.elements.front();
      auto inners = sort_sample(inner, dom);
      inners.resize(std::min<std::size_t>(inners.size(), 5));
      for (auto& v : inners) out.push_back(Value::some(std::move(v)));
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(Law law) {
  switch (law) {
    case Law::closure: return "closure";
    case Law::identity: return "identity";
    case Law::commutativity: return "commutativity";
    case Law::associativity: return "associativity";
    case Law::homomorphism: return "homomorphism";
  }
  return "?";
}

std::string_view to_string(LawStatus status) {
  switch (status) {
    case LawStatus::holds: return "holds";
    case LawStatus::violated: return "violated";
    case LawStatus::unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Approximation a) {
  return a == Approximation::closure ? "closure" : "sort_sample";
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::deterministic: return "deterministic";
    case VerdictKind::non_deterministic: return "nonDeterministic";
    case VerdictKind::unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::conditions: return "conditions";
    case Method::oracle: return "oracle";
    case Method::both: return "both";
  }
  return "?";
}

}  // namespace sparkdet
