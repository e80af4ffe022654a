#include <cmath>
#include <limits>

#include "sparkdet/cli.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet::cli {

namespace {

Json list_json(std::span<const Value> xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(Errc::parse_error, where + ": " + what);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Json to_json(const Value& v) {
  switch (v.kind()) {
    case Kind::Int:
      return v.as_int();
    case Kind::Float: {
      const double d = v.as_float();
      if (std::isnan(d)) return Json{{"float", "nan"}};
      if (std::isinf(d)) return Json{{"float", d > 0 ? "inf" : "-inf"}};
      return d;
    }
    case Kind::Bool:
      return v.as_bool();
    case Kind::Str:
      return v.as_str();
    case Kind::List:
      return list_json(v.items());
    case Kind::Set:
      return Json{{"set", list_json(v.items())}};
    case Kind::Pair:
      return Json{{"pair", Json::array({to_json(v.first()), to_json(v.second())})}};
    case Kind::Opt:
      if (!v.is_some()) return nullptr;
      return Json{{"some", to_json(v.unwrap())}};
  }
  return nullptr;
}

Value value_from_json(const Json& j, const std::string& where) {
  switch (j.type()) {
    case Json::value_t::null:
      return Value::none();
    case Json::value_t::boolean:
      return Value::boolean(j.get<bool>());
    case Json::value_t::number_integer:
      return Value::integer(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        bad(where, "integer out of Int64 range");
      }
      return Value::integer(static_cast<std::int64_t>(u));
    }
    case Json::value_t::number_float:
      return Value::real(j.get<double>());
    case Json::value_t::string:
      return Value::string(j.get<std::string>());
    case Json::value_t::array: {
      std::vector<Value> items;
      for (std::size_t i = 0; i < j.size(); ++i) {
        items.push_back(value_from_json(j[i], where + "[" + std::to_string(i) + "]"));
      }
      return Value::list(std::move(items));
    }
    case Json::value_t::object: {
      if (j.size() != 1) bad(where, "object must have exactly one of set, pair, some, float");
      const auto& [key, body] = *j.items().begin();
      const std::string inner = where + "." + key;
      if (key == "set") {
        if (!body.is_array()) bad(inner, "expected an array");
        std::vector<Value> items;
        for (std::size_t i = 0; i < body.size(); ++i) {
          items.push_back(value_from_json(body[i], inner + "[" + std::to_string(i) + "]"));
        }
        return Value::set(std::move(items));
      }
      if (key == "pair") {
        if (!body.is_array() || body.size() != 2) bad(inner, "expected a two-element array");
        return Value::pair(value_from_json(body[0], inner + "[0]"), value_from_json(body[1], inner + "[1]"));
      }
      if (key == "some") return Value::some(value_from_json(body, inner));
      if (key == "float") {
        if (body.is_number()) return Value::real(body.get<double>());
        if (body.is_string()) {
          const auto s = body.get<std::string>();
          if (s == "inf") return Value::real(std::numeric_limits<double>::infinity());
          if (s == "-inf") return Value::real(-std::numeric_limits<double>::infinity());
          if (s == "nan") return Value::real(std::numeric_limits<double>::quiet_NaN());
        }
        bad(inner, "expected a number, \"inf\", \"-inf\" or \"nan\"");
      }
      bad(where, "unknown tag \"" + key + "\"");
    }
    default:
      bad(where, "unsupported JSON value");
  }
}

Json parse_json_text(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(Errc::parse_error, std::string(origin) + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + msg);
  }
}

Json to_json(const Execution& e) {
  if (e.sequential) return Json{{"sequential", true}};
  Json out;
  Json parts = Json::array();
  for (const auto& p : e.rdd) parts.push_back(list_json(p));
  out["partitions"] = std::move(parts);
  if (e.plan) out["plan"] = e.plan->merges;
  return out;
}

Json to_json(const Counterexample& cx) {
  Json out;
  out["input"] = list_json(cx.input);
  out["left"] = to_json(cx.left);
  out["right"] = to_json(cx.right);
  out["left_output"] = to_json(cx.left_output);
  out["right_output"] = to_json(cx.right_output);
  if (cx.key) out["key"] = to_json(*cx.key);
  return out;
}

Json to_json(const LawReport& r) {
  Json out;
  out["law"] = to_string(r.law);
  out["status"] = to_string(r.status);
  if (!r.witness.empty()) out["witness"] = list_json(r.witness);
  if (!r.sides.empty()) out["sides"] = list_json(r.sides);
  if (r.status == LawStatus::violated) out["source"] = to_string(r.source);
  out["evaluations"] = r.evaluations;
  if (r.sampled) out["sampled"] = true;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const Verdict& v) {
  Json out;
  out["kind"] = to_string(v.kind);
  out["method"] = to_string(v.method);
  out["combinator"] = to_string(v.combinator);
  if (v.delegated_to) out["delegated_to"] = to_string(*v.delegated_to);
  if (!v.domain.empty()) out["domain"] = v.domain;
  if (!v.cause.empty()) out["cause"] = v.cause;
  if (v.method != Method::oracle) {
    out["level_bound"] = v.level_bound;
    out["closed"] = v.closed;
  }
  if (!v.laws.empty()) {
    Json laws = Json::array();
    for (const auto& l : v.laws) laws.push_back(to_json(l));
    out["laws"] = std::move(laws);
  }
  if (v.counterexample) out["counterexample"] = to_json(*v.counterexample);
  if (v.method != Method::conditions) {
    out["observed"] = list_json(v.observed);
    out["executions"] = v.executions;
  }
  if (!v.warnings.empty()) out["warnings"] = v.warnings;
  return out;
}

}  // namespace sparkdet::cli
