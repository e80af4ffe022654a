#include "sparkdet/registry.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>

#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

std::int64_t wrapping_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

std::int64_t wrapping_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}

Operator binary(std::string name, Sort l, Sort r, Sort out, Operator::Binary fn) {
  return Operator(std::move(name), l, r, out, std::move(fn));
}

Operator unary(std::string name, Sort in, Sort out, Operator::Unary fn) {
  return Operator(std::move(name), in, out, std::move(fn));
}

Operator sum_wrapping(std::string name) {
  return binary(std::move(name), Sort::Int, Sort::Int, Sort::Int, [](const Value& x, const Value& y) {
    return Value::integer(wrapping_add(x.as_int(), y.as_int()));
  });
}

std::vector<Operator> make_builtins() {
  std::vector<Operator> ops;

  ops.push_back(sum_wrapping("sum_i64_wrapping"));
  ops.push_back(sum_wrapping("sum_i64"));
  ops.push_back(binary("sum_i64_checked", Sort::Int, Sort::Int, Sort::Int,
                       [](const Value& x, const Value& y) {
                         std::int64_t out = 0;
                         if (__builtin_add_overflow(x.as_int(), y.as_int(), &out)) {
                           throw Error(Errc::operator_failure,
                                       "sum_i64_checked: " + x.to_string() + " + " +
                                           y.to_string() + " overflows");
                         }
                         return Value::integer(out);
                       }));
  ops.push_back(binary("sub_i64", Sort::Int, Sort::Int, Sort::Int,
                       [](const Value& x, const Value& y) {
                         return Value::integer(wrapping_sub(x.as_int(), y.as_int()));
                       }));
  ops.push_back(binary("max_i64", Sort::Int, Sort::Int, Sort::Int,
                       [](const Value& x, const Value& y) {
                         return Value::integer(std::max(x.as_int(), y.as_int()));
                       }));
  ops.push_back(binary("min_i64", Sort::Int, Sort::Int, Sort::Int,
                       [](const Value& x, const Value& y) {
                         return Value::integer(std::min(x.as_int(), y.as_int()));
                       }));
  ops.push_back(binary("sum_f64", Sort::Num, Sort::Num, Sort::Float,
                       [](const Value& x, const Value& y) {
                         return Value::real(x.as_number() + y.as_number());
                       }));
  ops.push_back(binary("mul_f64", Sort::Num, Sort::Num, Sort::Float,
                       [](const Value& x, const Value& y) {
                         return Value::real(x.as_number() * y.as_number());
                       }));
  ops.push_back(binary("concat_list", Sort::List, Sort::List, Sort::List,
                       [](const Value& x, const Value& y) {
                         std::vector<Value> out(x.items().begin(), x.items().end());
                         out.insert(out.end(), y.items().begin(), y.items().end());
                         return Value::list(std::move(out));
                       }));
  ops.push_back(binary("append", Sort::List, Sort::Any, Sort::List,
                       [](const Value& x, const Value& y) {
                         std::vector<Value> out(x.items().begin(), x.items().end());
                         out.push_back(y);
                         return Value::list(std::move(out));
                       }));
  ops.push_back(binary("union_set", Sort::Set, Sort::Set, Sort::Set,
                       [](const Value& x, const Value& y) {
                         std::vector<Value> out;
                         out.reserve(x.items().size() + y.items().size());
                         std::set_union(x.items().begin(), x.items().end(), y.items().begin(),
                                        y.items().end(), std::back_inserter(out));
                         return Value::set(std::move(out));
                       }));
  ops.push_back(binary("insert_set", Sort::Set, Sort::Any, Sort::Set,
                       [](const Value& x, const Value& y) {
                         std::vector<Value> out(x.items().begin(), x.items().end());
                         out.push_back(y);
                         return Value::set(std::move(out));
                       }));
  ops.push_back(binary("const_left", Sort::Any, Sort::Any, Sort::Any,
                       [](const Value& x, const Value&) { return x; }));
  ops.push_back(unary("first", Sort::Pair, Sort::Any, [](const Value& p) { return p.first(); }));
  ops.push_back(unary("second", Sort::Pair, Sort::Any, [](const Value& p) { return p.second(); }));
  ops.push_back(binary("mean_pair_merge", Sort::Pair, Sort::Pair, Sort::Pair,
                       [](const Value& a, const Value& b) {
                         return Value::pair(
                             Value::real(a.first().as_number() + b.first().as_number()),
                             Value::integer(wrapping_add(a.second().as_int(), b.second().as_int())));
                       }));
  ops.push_back(binary("mean_pair_seq", Sort::Pair, Sort::Num, Sort::Pair,
                       [](const Value& acc, const Value& x) {
                         return Value::pair(Value::real(acc.first().as_number() + x.as_number()),
                                            Value::integer(wrapping_add(acc.second().as_int(), 1)));
                       }));
  ops.push_back(binary("or_bool", Sort::Bool, Sort::Bool, Sort::Bool,
                       [](const Value& x, const Value& y) {
                         return Value::boolean(x.as_bool() || y.as_bool());
                       }));
  ops.push_back(binary("and_bool", Sort::Bool, Sort::Bool, Sort::Bool,
                       [](const Value& x, const Value& y) {
                         return Value::boolean(x.as_bool() && y.as_bool());
                       }));
  ops.push_back(unary("negate_i64", Sort::Int, Sort::Int, [](const Value& x) {
    return Value::integer(wrapping_sub(0, x.as_int()));
  }));
  ops.push_back(unary("even_i64", Sort::Int, Sort::Bool,
                      [](const Value& x) { return Value::boolean(x.as_int() % 2 == 0); }));
  ops.push_back(unary("identity", Sort::Any, Sort::Any, [](const Value& x) { return x; }));
  ops.push_back(unary("singleton_list", Sort::Any, Sort::List,
                      [](const Value& x) { return Value::list({x}); }));
  ops.push_back(unary("singleton_set", Sort::Any, Sort::Set,
                      [](const Value& x) { return Value::set({x}); }));
  ops.push_back(unary("factors", Sort::Int, Sort::List, [](const Value& x) {
    // Positive divisors of |x| in ascending order; 0 has none listed.
    const std::int64_t v = x.as_int();
    const std::uint64_t n = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    if (n > (std::uint64_t{1} << 40)) {
      throw Error(Errc::operator_failure, "factors: " + x.to_string() + " is too large");
    }
    std::vector<Value> lo;
    std::vector<Value> hi;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      lo.push_back(Value::integer(static_cast<std::int64_t>(d)));
      if (d != n / d) hi.push_back(Value::integer(static_cast<std::int64_t>(n / d)));
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return Value::list(std::move(lo));
  }));
  return ops;
}

const std::vector<Operator>& builtins() {
  static const std::vector<Operator> ops = make_builtins();
  return ops;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Returns the argument of `prefix(<arg>)`, if name has that shape.
std::optional<std::string_view> call_argument(std::string_view name, std::string_view prefix) {
  if (name.size() < prefix.size() + 2 || name.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (name[prefix.size()] != '(' || name.back() != ')') return std::nullopt;
  return trim(name.substr(prefix.size() + 1, name.size() - prefix.size() - 2));
}

}  // namespace

Operator resolve(std::string_view name) {
  name = trim(name);
  if (name.substr(0, 5) == "expr:") return parse_expression(name.substr(5));
  if (auto inner = call_argument(name, "maybe_lift_seq")) return lift_to_maybe(resolve(*inner)).seq;
  if (auto inner = call_argument(name, "maybe_lift_comb")) {
    return lift_to_maybe(resolve(*inner)).comb;
  }
  for (const auto& op : builtins()) {
    if (op.name() == name) return op;
  }
  throw Error(Errc::unknown_operator, "no operator named '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& op : builtins()) names.push_back(op.name());
  return names;
}

}  // namespace sparkdet
