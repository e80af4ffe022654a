#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sparkdet {

enum class Kind : std::uint8_t { Int, Float, Bool, Str, List, Set, Pair, Opt };

std::string_view kind_name(Kind kind);

/// Immutable element value flowing through RDDs.
///
/// Equality is structural. Doubles compare bitwise except that every NaN
/// equals every other NaN, so -0.0 and +0.0 are different values. The total
/// order used for sets and reports puts NaN above every other double and
/// -0.0 just below +0.0.
///
/// Composite payloads are shared, so copying a Value never deep-copies.
class Value {
 public:
  Value() : data_(std::int64_t{0}) {}

  static Value integer(std::int64_t v) { return Value(Storage(v)); }
  static Value real(double v) { return Value(Storage(v)); }
  static Value boolean(bool v) { return Value(Storage(v)); }
  static Value string(std::string v) { return Value(Storage(std::move(v))); }
  static Value list(std::vector<Value> items);
  static Value list(std::initializer_list<Value> items) { return list(std::vector<Value>(items)); }
  /// Sorts and removes structural duplicates.
  static Value set(std::vector<Value> items);
  static Value set(std::initializer_list<Value> items) { return set(std::vector<Value>(items)); }
  static Value pair(Value first, Value second);
  static Value none();
  static Value some(Value inner);

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  bool is(Kind k) const noexcept { return kind() == k; }
  bool is_number() const noexcept { return is(Kind::Int) || is(Kind::Float); }

  std::int64_t as_int() const;
  double as_float() const;
  /// Int or Float widened to double.
  double as_number() const;
  bool as_bool() const;
  const std::string& as_str() const;
  /// Elements of a List or Set (sets are in ascending order).
  std::span<const Value> items() const;
  const Value& first() const;
  const Value& second() const;
  bool is_some() const;
  bool is_none() const { return is(Kind::Opt) && !is_some(); }
  const Value& unwrap() const;

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    return compare(a, b) <=> 0;
  }

  /// Three-way comparison returning <0, 0 or >0.
  static int compare(const Value& a, const Value& b);

 private:
  struct ListRep {
    std::shared_ptr<const std::vector<Value>> items;
  };
  struct SetRep {
    std::shared_ptr<const std::vector<Value>> items;
  };
  struct PairRep {
    std::shared_ptr<const std::array<Value, 2>> parts;
  };
  struct OptRep {
    std::shared_ptr<const Value> inner;
  };
  using Storage =
      std::variant<std::int64_t, double, bool, std::string, ListRep, SetRep, PairRep, OptRep>;

  explicit Value(Storage s) : data_(std::move(s)) {}
  [[noreturn]] void wrong_kind(Kind wanted) const;

  Storage data_;
};

std::string to_string(std::span<const Value> values);

}  // namespace sparkdet
