#include "sparkdet/operator.hpp"

#include "sparkdet/error.hpp"

namespace sparkdet {

std::string_view sort_name(Sort sort) {
  switch (sort) {
    case Sort::Int: return "Int64";
    case Sort::Float: return "Float64";
    case Sort::Bool: return "Bool";
    case Sort::Str: return "Str";
    case Sort::List: return "List";
    case Sort::Set: return "Set";
    case Sort::Pair: return "Pair";
    case Sort::Opt: return "Opt";
    case Sort::Num: return "Num";
    case Sort::Any: return "Any";
  }
  return "?";
}

bool admits(Sort sort, const Value& v) {
  switch (sort) {
    case Sort::Int: return v.is(Kind::Int);
    case Sort::Float: return v.is(Kind::Float);
    case Sort::Bool: return v.is(Kind::Bool);
    case Sort::Str: return v.is(Kind::Str);
    case Sort::List: return v.is(Kind::List);
    case Sort::Set: return v.is(Kind::Set);
    case Sort::Pair: return v.is(Kind::Pair);
    case Sort::Opt: return v.is(Kind::Opt);
    case Sort::Num: return v.is_number();
    case Sort::Any: return true;
  }
  return false;
}

bool compatible(Sort produced, Sort wanted) {
  if (produced == wanted || wanted == Sort::Any || produced == Sort::Any) return true;
  if (wanted == Sort::Num) return produced == Sort::Int || produced == Sort::Float;
  if (produced == Sort::Num) return wanted == Sort::Int || wanted == Sort::Float;
  return false;
}

Operator::Operator(std::string name, Sort in, Sort out, Unary fn)
    : name_(std::move(name)), arity_(1), in_{in}, out_(out), unary_(std::move(fn)) {}

Operator::Operator(std::string name, Sort left, Sort right, Sort out, Binary fn)
    : name_(std::move(name)), arity_(2), in_{left, right}, out_(out), binary_(std::move(fn)) {}

void Operator::check_arg(std::size_t i, const Value& v) const {
  if (!admits(in_[i], v)) {
    throw Error(Errc::sort_mismatch, name_ + ": argument " + std::to_string(i + 1) + " expects " +
                                         std::string(sort_name(in_[i])) + ", got " +
                                         v.to_string());
  }
}

Value Operator::operator()(const Value& x) const {
  if (arity_ != 1) throw Error(Errc::sort_mismatch, name_ + " is binary, applied to one argument");
  check_arg(0, x);
  return unary_(x);
}

Value Operator::operator()(const Value& x, const Value& y) const {
  if (arity_ != 2) throw Error(Errc::sort_mismatch, name_ + " is unary, applied to two arguments");
  check_arg(0, x);
  check_arg(1, y);
  return binary_(x, y);
}

void OperatorTriple::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::sort_mismatch, what); };
  if (seq.arity() != 2) fail("seq " + seq.name() + " must be binary");
  if (comb.arity() != 2) fail("comb " + comb.name() + " must be binary");
  if (!admits(seq.in_sorts()[0], zero)) {
    fail("zero " + zero.to_string() + " is not accepted by seq " + seq.name());
  }
  if (!admits(comb.in_sorts()[0], zero) || !admits(comb.in_sorts()[1], zero)) {
    fail("zero " + zero.to_string() + " is not accepted by comb " + comb.name());
  }
  if (!compatible(seq.out_sort(), seq.in_sorts()[0])) {
    fail("seq " + seq.name() + " result cannot be fed back as its accumulator");
  }
  if (!compatible(seq.out_sort(), comb.in_sorts()[0]) ||
      !compatible(seq.out_sort(), comb.in_sorts()[1])) {
    fail("seq " + seq.name() + " result sort does not match comb " + comb.name());
  }
}

LiftedOperators lift_to_maybe(const Operator& op) {
  if (op.arity() != 2) {
    throw Error(Errc::sort_mismatch, "maybe lifting needs a binary operator, got " + op.name());
  }
  Operator seq(
      "maybe_lift_seq(" + op.name() + ")", Sort::Opt, op.in_sorts()[1], Sort::Opt,
      [op](const Value& acc, const Value& y) {
        if (acc.is_none()) return Value::some(y);
        return Value::some(op(acc.unwrap(), y));
      });
  Operator comb("maybe_lift_comb(" + op.name() + ")", Sort::Opt, Sort::Opt, Sort::Opt,
                [op](const Value& x, const Value& y) {
                  if (x.is_none()) return y;
                  if (y.is_none()) return x;
                  return Value::some(op(x.unwrap(), y.unwrap()));
                });
  return {std::move(seq), std::move(comb)};
}

}  // namespace sparkdet
