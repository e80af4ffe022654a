#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparkdet/value.hpp"

namespace sparkdet {

/// Declared argument/result sort of an operator. Num accepts Int or Float;
/// Any accepts everything.
enum class Sort { Int, Float, Bool, Str, List, Set, Pair, Opt, Num, Any };

std::string_view sort_name(Sort sort);
bool admits(Sort sort, const Value& v);
/// Whether a value produced under `produced` may be fed where `wanted` is declared.
bool compatible(Sort produced, Sort wanted);

/// A named, pure, total function over Values. Arguments are sort-checked
/// before the underlying function runs.
class Operator {
 public:
  using Unary = std::function<Value(const Value&)>;
  using Binary = std::function<Value(const Value&, const Value&)>;

  Operator(std::string name, Sort in, Sort out, Unary fn);
  Operator(std::string name, Sort left, Sort right, Sort out, Binary fn);

  const std::string& name() const noexcept { return name_; }
  int arity() const noexcept { return arity_; }
  const std::vector<Sort>& in_sorts() const noexcept { return in_; }
  Sort out_sort() const noexcept { return out_; }

  Value operator()(const Value& x) const;
  Value operator()(const Value& x, const Value& y) const;

 private:
  void check_arg(std::size_t i, const Value& v) const;

  std::string name_;
  int arity_;
  std::vector<Sort> in_;
  Sort out_;
  Unary unary_;
  Binary binary_;
};

/// (zero, seq, comb) for the aggregate family: zero : B, seq : B x A -> B,
/// comb : B x B -> B.
struct OperatorTriple {
  Value zero;
  Operator seq;
  Operator comb;

  /// Throws SortMismatch when the declared sorts do not compose.
  void validate() const;
};

/// seq' and comb' of the Maybe lifting: seq'(none, y) = some y,
/// seq'(some x, y) = some (x op y); comb' treats none as a two-sided identity.
struct LiftedOperators {
  Operator seq;
  Operator comb;
};

LiftedOperators lift_to_maybe(const Operator& op);

}  // namespace sparkdet
