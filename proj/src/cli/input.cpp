#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "sparkdet/cli.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_literal(std::string_view s) {
  s = trim(s);
  return !s.empty() && (s.front() == '[' || s.front() == '{');
}

[[noreturn]] void bad_at(std::string_view origin, std::size_t line, std::size_t col, const std::string& what) {
  throw Error(Errc::parse_error,
              std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

Json top_array(std::string_view text, std::string_view origin) {
  Json j = parse_json_text(text, origin);
  if (!j.is_array()) throw Error(Errc::parse_error, std::string(origin) + ": expected a JSON array");
  return j;
}

bool is_pair_json(const Json& j) {
  return (j.is_array() && j.size() == 2) || (j.is_object() && j.size() == 1 && j.contains("pair"));
}

KeyValue pair_from_json(const Json& j, const std::string& where) {
  if (!is_pair_json(j)) throw Error(Errc::parse_error, where + ": expected a [key, value] pair");
  if (j.is_object()) {
    const Value p = value_from_json(j, where);
    return {p.first(), p.second()};
  }
  return {value_from_json(j[0], where + "[0]"), value_from_json(j[1], where + "[1]")};
}

struct Field {
  std::string_view text;
  std::size_t column;
};

std::vector<Field> split_tabs(std::string_view line) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    const auto end = tab == std::string_view::npos ? line.size() : tab;
    out.push_back({line.substr(start, end - start), start + 1});
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <class F>
void for_each_row(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty() && trim(line).front() != '#') f(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

VertexId parse_id(std::string_view origin, std::size_t line, const Field& f) {
  VertexId id = 0;
  const auto t = f.text;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), id);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad_at(origin, line, f.column, "expected an integer vertex id, got \"" + std::string(t) + "\"");
  }
  return id;
}

Value parse_attr(const Field& f) {
  const std::string s(f.text);
  if (Json::accept(s)) return value_from_json(Json::parse(s), "attribute");
  return Value::string(s);
}

}  // namespace

std::string load_text(const std::string& path_or_literal) {
  if (is_literal(path_or_literal)) return path_or_literal;
  std::ifstream in(path_or_literal, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot read " + path_or_literal);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Value> RddInput::flat() const {
  std::vector<Value> out;
  for (const auto& p : rdd) out.insert(out.end(), p.begin(), p.end());
  return out;
}

RddInput parse_rdd(std::string_view text) {
  const Json j = top_array(text, "input");
  RddInput in;
  bool nested = !j.empty();
  for (const auto& x : j) nested = nested && x.is_array();
  in.explicit_partitions = nested;
  if (nested) {
    for (std::size_t p = 0; p < j.size(); ++p) {
      Partition part;
      for (std::size_t i = 0; i < j[p].size(); ++i) {
        part.push_back(value_from_json(j[p][i], "input[" + std::to_string(p) + "][" + std::to_string(i) + "]"));
      }
      in.rdd.push_back(std::move(part));
    }
  } else {
    Partition part;
    for (std::size_t i = 0; i < j.size(); ++i) {
      part.push_back(value_from_json(j[i], "input[" + std::to_string(i) + "]"));
    }
    in.rdd.push_back(std::move(part));
  }
  return in;
}

std::vector<Value> PairInput::flat_pairs() const {
  std::vector<Value> out;
  for (const auto& p : rdd) {
    for (const auto& [k, v] : p) out.push_back(Value::pair(k, v));
  }
  return out;
}

PairInput parse_pairs(std::string_view text) {
  const Json j = top_array(text, "input");
  PairInput in;
  bool nested = !j.empty();
  for (const auto& x : j) {
    if (!x.is_array()) {
      nested = false;
      continue;
    }
    for (const auto& y : x) nested = nested && is_pair_json(y);
  }
  in.explicit_partitions = nested;
  if (nested) {
    for (std::size_t p = 0; p < j.size(); ++p) {
      PairPartition part;
      for (std::size_t i = 0; i < j[p].size(); ++i) {
        part.push_back(pair_from_json(j[p][i], "input[" + std::to_string(p) + "][" + std::to_string(i) + "]"));
      }
      in.rdd.push_back(std::move(part));
    }
  } else {
    PairPartition part;
    for (std::size_t i = 0; i < j.size(); ++i) {
      part.push_back(pair_from_json(j[i], "input[" + std::to_string(i) + "]"));
    }
    in.rdd.push_back(std::move(part));
  }
  return in;
}

ValueGraph parse_graph(std::string_view edges_tsv, std::optional<std::string_view> vertices_tsv) {
  std::vector<std::pair<VertexId, Value>> vertices;
  if (vertices_tsv) {
    std::map<VertexId, std::size_t> first_line;
    for_each_row(*vertices_tsv, [&](std::size_t line, std::string_view row) {
      const auto fields = split_tabs(row);
      if (fields.size() > 2) bad_at("vertices", line, fields[2].column, "expected `id<TAB>attr`");
      const VertexId id = parse_id("vertices", line, fields[0]);
      if (auto [it, fresh] = first_line.emplace(id, line); !fresh) {
        bad_at("vertices", line, 1,
               "vertex " + std::to_string(id) + " already listed on line " + std::to_string(it->second));
      }
      vertices.emplace_back(id, fields.size() == 2 ? parse_attr(fields[1]) : Value::none());
    });
  }
  std::vector<Edge<Value>> edges;
  for_each_row(edges_tsv, [&](std::size_t line, std::string_view row) {
    const auto fields = split_tabs(row);
    if (fields.size() < 2) bad_at("edges", line, row.size() + 1, "expected `src<TAB>dst<TAB>attr?`");
    if (fields.size() > 3) bad_at("edges", line, fields[3].column, "expected `src<TAB>dst<TAB>attr?`");
    const VertexId src = parse_id("edges", line, fields[0]);
    const VertexId dst = parse_id("edges", line, fields[1]);
    edges.push_back({src, dst, fields.size() == 3 ? parse_attr(fields[2]) : Value::none()});
  });
  return make_graph(vertices, edges);
}

Domain parse_domain(const std::string& spec) {
  static const std::regex range(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(spec, m, range)) {
    const auto lo = std::stoll(m[1]);
    const auto hi = std::stoll(m[2]);
    if (lo > hi) throw Error(Errc::parse_error, "domain range " + spec + " is empty");
    return Domain::int_range(lo, hi);
  }
  const bool literal = is_literal(spec);
  const std::string text = load_text(spec);
  const Json j = top_array(text, literal ? "domain" : spec);
  std::vector<Value> xs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    xs.push_back(value_from_json(j[i], "domain[" + std::to_string(i) + "]"));
  }
  if (xs.empty()) throw Error(Errc::parse_error, "domain is empty");
  return Domain::of(std::move(xs), literal ? std::string(trim(spec)) : spec);
}

Value parse_value_literal(std::string_view text) {
  const auto t = trim(text);
  if (t == "none") return Value::none();
  return value_from_json(parse_json_text(t, "value"));
}

}  // namespace sparkdet::cli
