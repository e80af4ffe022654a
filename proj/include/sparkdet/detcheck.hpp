#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparkdet/combinators.hpp"

namespace sparkdet {

/// Combinators the checker knows about.
enum class Combinator {
  aggregate,
  reduce,
  tree_aggregate,
  tree_reduce,
  aggregate_by_key,
  reduce_by_key,
  aggregate_messages,
};

std::string_view to_string(Combinator c);
std::optional<Combinator> parse_combinator(std::string_view name);
bool is_reduce_family(Combinator c);
bool is_by_key(Combinator c);

/// What is being checked: a combinator with its operators. Reduce-family
/// subjects only use `comb` (seq holds the same operator, zero is unused).
struct Subject {
  Combinator combinator;
  Value zero;
  Operator seq;
  Operator comb;

  static Subject of(Combinator c, const OperatorTriple& t);
  static Subject of(Combinator c, const Operator& comb);
  OperatorTriple triple() const { return {zero, seq, comb}; }
};

/// Finite test universe for the element sort.
struct Domain {
  std::vector<Value> elements;
  std::string label;

  /// Integers lo..hi inclusive, labelled "lo..hi".
  static Domain int_range(std::int64_t lo, std::int64_t hi);
  static Domain of(std::vector<Value> elements, std::string label = {});
};

struct CheckOptions {
  /// Law evaluations allowed per law before switching to sampling.
  std::size_t budget = 1'000'000;
  std::uint64_t seed = 0x5EEDull;
  /// Accumulator closure depth: the image of lists up to this length.
  std::size_t max_level = kDefaultEnumerationCap;
  /// Closure stops (and is marked truncated) past this many values.
  std::size_t size_cap = 512;
  /// Longest list the oracle enumerates exhaustively.
  std::size_t cap = kDefaultEnumerationCap;
  /// Random executions tried by the oracle beyond the cap.
  std::size_t sample_trials = 2000;
  /// Also test laws on a fixed sample of the accumulator sort.
  bool sort_sample = true;
  /// Keys used to build pair lists for by-key cross validation.
  std::vector<Value> keys = {Value::string("a"), Value::string("b")};
};

/// Approximation of Img[foldl(seq, z)] (or Img[reducel comb]): every value
/// reachable from lists over the domain of length at most `level_bound`,
/// each with its shortest generating list.
struct AccumulatorSet {
  std::vector<Value> values;  // ascending
  std::vector<std::vector<Value>> sources;
  std::vector<std::size_t> levels;  // sources[i].size()
  /// The set is closed under the generating operator: it is the full image.
  bool closed = false;
  /// The size cap cut the closure short of level_bound.
  bool truncated = false;
  std::size_t level_bound = 0;

  std::optional<std::size_t> index_of(const Value& v) const;
};

AccumulatorSet accumulator_closure(const OperatorTriple& t, const Domain& dom,
                                   const CheckOptions& opts = {});
/// Image of reducel comb over non-empty lists of the domain.
AccumulatorSet reduce_closure(const Operator& comb, const Domain& dom,
                              const CheckOptions& opts = {});

/// A handful of representative values of the sort of `like` (edge values for
/// numbers, small shapes for collections).
std::vector<Value> sort_sample(const Value& like, const Domain& dom);

enum class Law { closure, identity, commutativity, associativity, homomorphism };
enum class LawStatus { holds, violated, unknown };
/// Which set produced a witness.
enum class Approximation { closure, sort_sample };

std::string_view to_string(Law law);
std::string_view to_string(LawStatus status);
std::string_view to_string(Approximation a);

struct LawReport {
  Law law = Law::closure;
  LawStatus status = LawStatus::holds;
  /// Arguments of the violating instance: (a) for identity, (a, b) for
  /// closure and commutativity, (a, b, c) for associativity, (e, d) for the
  /// homomorphism law.
  std::vector<Value> witness;
  /// Both sides of the violated equation (or the offending result for closure).
  std::vector<Value> sides;
  Approximation source = Approximation::closure;
  std::size_t evaluations = 0;
  bool sampled = false;
  std::string note;
};

/// Law results over the closure set, then over the sort sample. A law is
/// reported violated by the first witness of the closure pass, with
/// arguments ordered by generating-list length and then by value.
/// Sort-sample witnesses are only used when the closure pass found none.
std::vector<LawReport> check_monoid_laws(const Operator& comb, const Value& zero,
                                         const AccumulatorSet& acc, const Domain& dom,
                                         const CheckOptions& opts = {});
LawReport check_homomorphism(const OperatorTriple& t, const AccumulatorSet& acc,
                             const Domain& dom, const CheckOptions& opts = {});
/// Closure, commutativity and associativity over Img[reducel comb].
std::vector<LawReport> check_semigroup_laws(const Operator& comb, const AccumulatorSet& acc,
                                            const Domain& dom, const CheckOptions& opts = {});

/// One concrete run of a combinator. `sequential` marks the foldl / reducel
/// reference; otherwise `rdd` (and `plan` for tree combinators) pins every
/// chaotic choice. By-key executions hold partitions of Pair values.
struct Execution {
  bool sequential = false;
  Rdd rdd;
  std::optional<ReductionPlan> plan;

  friend bool operator==(const Execution&, const Execution&) = default;
};

struct Counterexample {
  std::vector<Value> input;
  Execution left;
  Execution right;
  Value left_output;
  Value right_output;
  /// By-key subjects: the key whose lookups differ.
  std::optional<Value> key;
};

/// Evaluates one execution. By-key results come back as a list of
/// (key, value) pairs sorted by key. Throws like the combinators do.
Value run_execution(const Subject& s, const std::vector<Value>& input, const Execution& e);
/// Re-evaluates both sides; true when they differ.
bool replays(const Subject& s, const Counterexample& cx);

enum class VerdictKind { deterministic, non_deterministic, unknown };
enum class Method { conditions, oracle, both };

std::string_view to_string(VerdictKind k);
std::string_view to_string(Method m);

struct Verdict {
  VerdictKind kind = VerdictKind::unknown;
  Method method = Method::conditions;
  Combinator combinator = Combinator::aggregate;
  std::optional<Combinator> delegated_to;
  std::string domain;
  std::vector<LawReport> laws;
  std::optional<Counterexample> counterexample;
  /// Oracle runs: distinct outputs observed, ascending.
  std::vector<Value> observed;
  std::size_t executions = 0;
  /// Empty, or one of: budget, operator_error, sampled, unrealized_witness,
  /// sufficient_condition_failed, truncated_closure.
  std::string cause;
  std::vector<std::string> warnings;
  /// Closure facts behind a conditions verdict.
  std::size_t level_bound = 0;
  bool closed = false;
};

// Condition checks.
Verdict check_aggregate(const OperatorTriple& t, const Domain& dom, const CheckOptions& opts = {});
Verdict check_reduce(const Operator& comb, const Domain& dom, const CheckOptions& opts = {});
Verdict check_tree_aggregate(const OperatorTriple& t, const Domain& dom,
                             const CheckOptions& opts = {});
Verdict check_tree_reduce(const Operator& comb, const Domain& dom, const CheckOptions& opts = {});
Verdict check_aggregate_by_key(const OperatorTriple& t, const Domain& dom,
                               const CheckOptions& opts = {});
Verdict check_reduce_by_key(const Operator& merge_value, const Domain& dom,
                            const CheckOptions& opts = {});
/// Sufficient condition only: deterministic, or unknown when the
/// reduceByKey check fails.
Verdict check_aggregate_messages(const Operator& merge_msg, const Domain& dom,
                                 const CheckOptions& opts = {});
Verdict check(const Subject& s, const Domain& dom, const CheckOptions& opts = {});

// Exhaustive oracles (seeded sampling beyond opts.cap).
Verdict oracle_aggregate(const OperatorTriple& t, const std::vector<Value>& xs,
                         const CheckOptions& opts = {});
Verdict oracle_reduce(const Operator& comb, const std::vector<Value>& xs,
                      const CheckOptions& opts = {});
Verdict oracle_tree_aggregate(const OperatorTriple& t, const std::vector<Value>& xs,
                              const CheckOptions& opts = {});
Verdict oracle_tree_reduce(const Operator& comb, const std::vector<Value>& xs,
                           const CheckOptions& opts = {});
/// `pairs` holds Pair values (key, value).
Verdict oracle_aggregate_by_key(const OperatorTriple& t, const std::vector<Value>& pairs,
                                const CheckOptions& opts = {});
Verdict oracle_reduce_by_key(const Operator& merge_value, const std::vector<Value>& pairs,
                             const CheckOptions& opts = {});
Verdict oracle(const Subject& s, const std::vector<Value>& xs, const CheckOptions& opts = {});

/// Greedy minimisation of an oracle counterexample input: drops elements and
/// halves numbers while the oracle still finds a discrepancy.
std::vector<Value> shrink_input(const Subject& s, std::vector<Value> xs,
                                const CheckOptions& opts = {});

struct Disagreement {
  std::vector<Value> input;
  VerdictKind conditions;
  VerdictKind oracle;
};

struct AgreementReport {
  Subject subject;
  std::string domain;
  std::size_t max_len = 0;
  Verdict conditions;
  /// Oracle verdict over every list of length <= max_len (nonDeterministic
  /// as soon as one list is).
  VerdictKind oracle = VerdictKind::deterministic;
  std::optional<Counterexample> oracle_counterexample;
  std::size_t lists = 0;
  std::size_t executions = 0;
  bool abstained = false;
  std::vector<Disagreement> disagreements;

  bool agree() const { return disagreements.empty(); }
};

/// Runs the condition check scoped to lists of length <= max_len and the
/// oracle on every list over the domain (pairs over opts.keys for by-key
/// subjects) up to that length, and reports any disagreement.
AgreementReport cross_validate(const Subject& s, const Domain& dom, std::size_t max_len,
                               const CheckOptions& opts = {});

}  // namespace sparkdet
