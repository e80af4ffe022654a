#include "sparkdet/value.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>

#include "sparkdet/error.hpp"

namespace sparkdet {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Int: return "Int64";
    case Kind::Float: return "Float64";
    case Kind::Bool: return "Bool";
    case Kind::Str: return "Str";
    case Kind::List: return "List";
    case Kind::Set: return "Set";
    case Kind::Pair: return "Pair";
    case Kind::Opt: return "Opt";
  }
  return "?";
}

namespace {

const std::shared_ptr<const std::vector<Value>>& empty_items() {
  static const auto empty = std::make_shared<const std::vector<Value>>();
  return empty;
}

int compare_doubles(double a, double b) {
  const bool na = std::isnan(a);
  const bool nb = std::isnan(b);
  if (na || nb) return na == nb ? 0 : (na ? 1 : -1);
  if (a < b) return -1;
  if (b < a) return 1;
  // Equal magnitudes; only the sign of zero can still differ.
  const bool sa = std::signbit(a);
  const bool sb = std::signbit(b);
  if (sa == sb) return 0;
  return sa ? -1 : 1;
}

int compare_ranges(std::span<const Value> a, std::span<const Value> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = Value::compare(a[i], b[i]); c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string out(buf, end);
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Value Value::list(std::vector<Value> items) {
  if (items.empty()) return Value(Storage(ListRep{empty_items()}));
  return Value(Storage(ListRep{std::make_shared<const std::vector<Value>>(std::move(items))}));
}

Value Value::set(std::vector<Value> items) {
  if (items.empty()) return Value(Storage(SetRep{empty_items()}));
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return Value(Storage(SetRep{std::make_shared<const std::vector<Value>>(std::move(items))}));
}

Value Value::pair(Value first, Value second) {
  return Value(Storage(PairRep{std::make_shared<const std::array<Value, 2>>(
      std::array<Value, 2>{std::move(first), std::move(second)})}));
}

Value Value::none() { return Value(Storage(OptRep{nullptr})); }

Value Value::some(Value inner) {
  return Value(Storage(OptRep{std::make_shared<const Value>(std::move(inner))}));
}

void Value::wrong_kind(Kind wanted) const {
  throw Error(Errc::sort_mismatch, "expected " + std::string(kind_name(wanted)) + ", got " +
                                       std::string(kind_name(kind())) + " " + to_string());
}

std::int64_t Value::as_int() const {
  if (!is(Kind::Int)) wrong_kind(Kind::Int);
  return std::get<std::int64_t>(data_);
}

double Value::as_float() const {
  if (!is(Kind::Float)) wrong_kind(Kind::Float);
  return std::get<double>(data_);
}

double Value::as_number() const {
  if (is(Kind::Int)) return static_cast<double>(std::get<std::int64_t>(data_));
  if (!is(Kind::Float)) wrong_kind(Kind::Float);
  return std::get<double>(data_);
}

bool Value::as_bool() const {
  if (!is(Kind::Bool)) wrong_kind(Kind::Bool);
  return std::get<bool>(data_);
}

const std::string& Value::as_str() const {
  if (!is(Kind::Str)) wrong_kind(Kind::Str);
  return std::get<std::string>(data_);
}

std::span<const Value> Value::items() const {
  if (is(Kind::List)) return *std::get<ListRep>(data_).items;
  if (is(Kind::Set)) return *std::get<SetRep>(data_).items;
  wrong_kind(Kind::List);
}

const Value& Value::first() const {
  if (!is(Kind::Pair)) wrong_kind(Kind::Pair);
  return (*std::get<PairRep>(data_).parts)[0];
}

const Value& Value::second() const {
  if (!is(Kind::Pair)) wrong_kind(Kind::Pair);
  return (*std::get<PairRep>(data_).parts)[1];
}

bool Value::is_some() const {
  if (!is(Kind::Opt)) wrong_kind(Kind::Opt);
  return std::get<OptRep>(data_).inner != nullptr;
}

const Value& Value::unwrap() const {
  if (!is_some()) throw Error(Errc::sort_mismatch, "unwrap of none");
  return *std::get<OptRep>(data_).inner;
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Int: {
      auto x = std::get<std::int64_t>(a.data_);
      auto y = std::get<std::int64_t>(b.data_);
      return x < y ? -1 : (y < x ? 1 : 0);
    }
    case Kind::Float:
      return compare_doubles(std::get<double>(a.data_), std::get<double>(b.data_));
    case Kind::Bool:
      return static_cast<int>(std::get<bool>(a.data_)) - static_cast<int>(std::get<bool>(b.data_));
    case Kind::Str: {
      int c = std::get<std::string>(a.data_).compare(std::get<std::string>(b.data_));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::List:
    case Kind::Set:
      return compare_ranges(a.items(), b.items());
    case Kind::Pair: {
      if (int c = compare(a.first(), b.first()); c != 0) return c;
      return compare(a.second(), b.second());
    }
    case Kind::Opt: {
      const bool sa = a.is_some();
      const bool sb = b.is_some();
      if (sa != sb) return sa ? 1 : -1;
      return sa ? compare(a.unwrap(), b.unwrap()) : 0;
    }
  }
  return 0;
}

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Int: return std::to_string(std::get<std::int64_t>(data_));
    case Kind::Float: return format_double(std::get<double>(data_));
    case Kind::Bool: return std::get<bool>(data_) ? "true" : "false";
    case Kind::Str: return quote(std::get<std::string>(data_));
    case Kind::List: return sparkdet::to_string(items());
    case Kind::Set: {
      std::string out = sparkdet::to_string(items());
      out.front() = '{';
      out.back() = '}';
      return out;
    }
    case Kind::Pair: return "(" + first().to_string() + "," + second().to_string() + ")";
    case Kind::Opt: return is_some() ? "some(" + unwrap().to_string() + ")" : "none";
  }
  return "?";
}

std::string to_string(std::span<const Value> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i].to_string();
  }
  out += "]";
  return out;
}

}  // namespace sparkdet
