#include <cmath>

#include "internal.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

// Smaller replacements for one element, most aggressive first.
std::vector<Value> smaller(const Value& v) {
  std::vector<Value> out;
  switch (v.kind()) {
    case Kind::Int: {
      const auto x = v.as_int();
      if (x != 0) out.push_back(Value::integer(0));
      if (x / 2 != 0 && x / 2 != x) out.push_back(Value::integer(x / 2));
      break;
    }
    case Kind::Float: {
      const double x = v.as_float();
      if (!std::isfinite(x) || x == 0.0) break;
      out.push_back(Value::real(0.0));
      const double half = std::trunc(x / 2);
      if (half != 0.0 && half != x) out.push_back(Value::real(half));
      break;
    }
    case Kind::Pair:
      for (auto& s : smaller(v.second())) out.push_back(Value::pair(v.first(), s));
      break;
    case Kind::List:
    case Kind::Set: {
      const auto items = v.items();
      for (std::size_t i = 0; i < items.size(); ++i) {
        std::vector<Value> rest(items.begin(), items.end());
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(v.is(Kind::List) ? Value::list(rest) : Value::set(rest));
      }
      break;
    }
    default: break;
  }
  return out;
}

}  // namespace

std::vector<Value> shrink_input(const Subject& s, std::vector<Value> xs, const CheckOptions& opts) {
  auto still = [&](const std::vector<Value>& ys) {
    if (ys.empty() && is_reduce_family(s.combinator) && !is_by_key(s.combinator)) return false;
    try {
      return detail::oracle_unguarded(s, ys, opts).kind == VerdictKind::non_deterministic;
    } catch (const Error&) {
      return false;
    }
  };
  if (!still(xs)) return xs;
  // Each accepted step strictly shrinks the list or one magnitude, so the
  // pass count only guards against pathological inputs.
  for (int pass = 0; pass < 4096; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < xs.size() && !changed; ++i) {
      auto ys = xs;
      ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(i));
      if (still(ys)) {
        xs = std::move(ys);
        changed = true;
      }
    }
    for (std::size_t i = 0; i < xs.size() && !changed; ++i) {
      for (const auto& cand : smaller(xs[i])) {
        auto ys = xs;
        ys[i] = cand;
        if (still(ys)) {
          xs = std::move(ys);
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return xs;
}

}  // namespace sparkdet
