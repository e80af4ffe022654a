#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "sparkdet/cli.hpp"
#include "sparkdet/error.hpp"
#include "sparkdet/registry.hpp"

namespace sparkdet::cli {

namespace {

using Clock = std::chrono::steady_clock;

OperatorTriple fp_sum() {
  const Operator sum = resolve("sum_f64");
  return {Value::real(0.0), sum, sum};
}

std::string to_decimal(__int128 x) {
  if (x == 0) return "0";
  const bool neg = x < 0;
  std::string out;
  while (x != 0) {
    const int digit = static_cast<int>(x % 10);
    out.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
    x /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Json rational_json(const Rational& r) {
  if (r.den == 1) return to_decimal(r.num);
  return to_decimal(r.num) + "/" + to_decimal(r.den);
}

Json spread(const std::vector<Value>& outputs) {
  Json out;
  out["distinct"] = census(outputs).size();
  if (!outputs.empty()) {
    out["min"] = to_json(*std::min_element(outputs.begin(), outputs.end()));
    out["max"] = to_json(*std::max_element(outputs.begin(), outputs.end()));
  }
  return out;
}

/// Trials repartition `data` into `parts` blocks and run `combine` on them.
RunReport fp_study(const CaseStudyOptions& opts, const std::vector<Value>& data, std::size_t parts,
                   const std::function<Value(ChaosSource&, const Rdd&)>& combine) {
  RunReport r;
  r.seed = opts.seed;
  r.trials = run_trials(
      opts.seed, opts.trials,
      [&](ChaosSource& chaos, std::size_t) {
        const Rdd rdd = random_partitioning_into(chaos, data.size(), parts).apply(data);
        return combine(chaos, rdd);
      },
      opts.workers);
  r.details["elements"] = data.size();
  r.details["partitions"] = parts;
  return r;
}

ValueGraph undirected(std::vector<std::pair<VertexId, VertexId>> es, std::vector<VertexId> extra = {}) {
  std::vector<Edge<Value>> edges;
  for (auto [a, b] : es) edges.push_back({std::max(a, b), std::min(a, b), Value::none()});
  std::vector<std::pair<VertexId, Value>> vs;
  for (VertexId v : extra) vs.emplace_back(v, Value::none());
  return make_graph(vs, edges);
}

std::vector<NamedGraph> sample_graphs() {
  std::vector<NamedGraph> out;
  std::vector<std::pair<VertexId, VertexId>> petersen;
  for (VertexId i = 0; i < 5; ++i) {
    petersen.emplace_back(1 + i, 1 + (i + 1) % 5);
    petersen.emplace_back(6 + i, 6 + (i + 2) % 5);
    petersen.emplace_back(1 + i, 6 + i);
  }
  out.push_back({"petersen", undirected(petersen)});
  out.push_back({"bowtie-tail", undirected({{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {3, 5}, {5, 6}}, {7})});
  std::vector<std::pair<VertexId, VertexId>> k5;
  for (VertexId a = 1; a <= 5; ++a) {
    for (VertexId b = a + 1; b <= 5; ++b) k5.emplace_back(a, b);
  }
  out.push_back({"k5", undirected(k5)});
  std::vector<std::pair<VertexId, VertexId>> grid;
  for (VertexId r = 0; r < 3; ++r) {
    for (VertexId c = 0; c < 3; ++c) {
      const VertexId v = 1 + 3 * r + c;
      if (c < 2) grid.emplace_back(v, v + 1);
      if (r < 2) grid.emplace_back(v, v + 3);
    }
  }
  out.push_back({"grid-3x3", undirected(grid)});
  return out;
}

template <class T>
Value map_value(const std::map<VertexId, T>& m) {
  std::vector<Value> items;
  for (const auto& [id, x] : m) items.push_back(Value::pair(Value::integer(id), Value::integer(x)));
  return Value::list(std::move(items));
}

}  // namespace

RunReport run_graph_study(const std::vector<NamedGraph>& graphs, const CaseStudyOptions& opts) {
  static const std::vector<std::string> algorithms = {"triangle", "components", "indegrees", "cfl"};
  if (std::find(algorithms.begin(), algorithms.end(), opts.name) == algorithms.end()) {
    throw Error(Errc::invalid_argument, "unknown graph algorithm \"" + opts.name + "\"");
  }
  auto colours = [&](const ValueGraph& g) {
    return opts.k > 0 ? opts.k : static_cast<int>(max_degree(g)) + 1;
  };
  const std::string& name = opts.name;
  RunReport r;
  r.seed = opts.seed;
  r.trials = run_trials(
      opts.seed, opts.trials,
      [&](ChaosSource& chaos, std::size_t) {
        std::vector<Value> per_graph;
        for (const auto& sg : graphs) {
          if (name == "triangle") {
            per_graph.push_back(map_value(message_map(triangle_count(chaos, sg.graph))));
          } else if (name == "components") {
            per_graph.push_back(map_value(vertex_map(connected_components(chaos, sg.graph).graph)));
          } else if (name == "indegrees") {
            per_graph.push_back(map_value(message_map(in_degrees(chaos, sg.graph))));
          } else {
            CflOptions co;
            co.k = colours(sg.graph);
            co.beta = opts.beta;
            const auto res = cfl_coloring(chaos, sg.graph, co);
            std::map<VertexId, std::int64_t> colors;
            for (const auto& [id, s] : vertex_map(res.graph)) colors[id] = s.color;
            per_graph.push_back(Value::list({Value::boolean(res.converged && proper_coloring(res.graph)),
                                             Value::integer(static_cast<std::int64_t>(res.iterations)),
                                             map_value(colors)}));
          }
        }
        return Value::list(std::move(per_graph));
      },
      opts.workers);

  Json gs = Json::array();
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto& sg = graphs[g];
    Json entry;
    entry["name"] = sg.name;
    entry["vertices"] = vertex_ids(sg.graph).size();
    std::size_t ne = 0;
    for (const auto& p : sg.graph.edges) ne += p.size();
    entry["edges"] = ne;
    std::size_t agree = 0;
    if (name == "cfl") {
      entry["k"] = colours(sg.graph);
      for (const auto& out : r.trials.outputs) agree += out.items()[g].items()[0].as_bool() ? 1 : 0;
      entry["check"] = "converged with a proper colouring";
    } else {
      Value expected;
      if (name == "triangle") expected = map_value(brute_force_triangles(sg.graph));
      if (name == "components") expected = map_value(union_find_components(sg.graph));
      if (name == "indegrees") expected = map_value(count_in_degrees(sg.graph));
      entry["oracle"] = to_json(expected);
      for (const auto& out : r.trials.outputs) agree += out.items()[g] == expected ? 1 : 0;
    }
    entry["agreeing_trials"] = agree;
    gs.push_back(std::move(entry));
  }
  r.details["graphs"] = std::move(gs);
  return r;
}

std::vector<Value> odd_integral_terms(std::size_t points) {
  if (points == 0) throw Error(Errc::invalid_argument, "need at least one point");
  const double dx = 4.0 / static_cast<double>(points);
  std::vector<Value> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -2.0 + (static_cast<double>(i) + 0.5) * dx;
    out.push_back(Value::real(std::pow(x, 73) * dx));
  }
  return out;
}

std::vector<Value> scaler_data(std::size_t n) {
  std::vector<Value> out;
  out.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Value::real(-1e20));
    out.push_back(Value::real(600.0));
    out.push_back(Value::real(1e20));
  }
  return out;
}

std::vector<Value> gradient_values() {
  // Fixed pseudo-random subgradient components spanning 1e-4 .. 1e12.
  ChaosSource g(0x6AD1E47ull);
  std::vector<Value> out;
  for (int i = 0; i < 2000; ++i) {
    const double mantissa = 1.0 + 9.0 * g.uniform01();
    const int exponent = static_cast<int>(g.uniform(17)) - 4;
    const double sign = g.uniform(2) == 0 ? -1.0 : 1.0;
    out.push_back(Value::real(sign * mantissa * std::pow(10.0, exponent)));
  }
  return out;
}

Rational exact_mean(const std::vector<Value>& xs) {
  if (xs.empty()) throw Error(Errc::invalid_argument, "mean of an empty list");
  __int128 sum = 0;
  for (const auto& x : xs) {
    const double d = x.as_number();
    if (!std::isfinite(d) || std::trunc(d) != d || std::abs(d) >= 1e36) {
      throw Error(Errc::invalid_argument, "exact mean needs integral values, got " + x.to_string());
    }
    sum += static_cast<__int128>(d);
  }
  Rational r{sum, static_cast<__int128>(xs.size())};
  __int128 a = r.num < 0 ? -r.num : r.num;
  __int128 b = r.den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    r.num /= a;
    r.den /= a;
  }
  return r;
}

std::vector<std::string> case_study_names() {
  return {"odd-integral", "standard-scaler", "gradient-sum", "triangle", "components", "indegrees", "cfl"};
}

RunReport run_case_study(const CaseStudyOptions& opts) {
  const auto start = Clock::now();
  const auto names = case_study_names();
  if (std::find(names.begin(), names.end(), opts.name) == names.end()) {
    throw Error(Errc::invalid_argument, "unknown case study \"" + opts.name + "\"");
  }
  const OperatorTriple fp = fp_sum();
  RunReport r;
  if (opts.name == "odd-integral") {
    const auto data = odd_integral_terms(opts.points);
    const std::size_t parts = opts.partitions ? opts.partitions : 20;
    r = fp_study(opts, data, parts,
                 [&](ChaosSource& chaos, const Rdd& rdd) { return tree_aggregate(chaos, fp, rdd); });
    r.details["points"] = opts.points;
    r.details["exact"] = 0;
    r.details["reference"] = to_json(foldl_ref(fp.seq, fp.zero, data));
  } else if (opts.name == "standard-scaler") {
    const auto data = scaler_data(opts.n);
    const std::size_t parts = opts.partitions ? opts.partitions : 100;
    const double count = static_cast<double>(data.size());
    r = fp_study(opts, data, parts, [&](ChaosSource& chaos, const Rdd& rdd) {
      return Value::real(aggregate(chaos, fp, rdd).as_float() / count);
    });
    r.details["n"] = opts.n;
    r.details["exact_mean"] = rational_json(exact_mean(data));
    r.details["reference"] = to_json(Value::real(foldl_ref(fp.seq, fp.zero, data).as_float() / count));
  } else if (opts.name == "gradient-sum") {
    const auto data = gradient_values();
    const std::size_t parts = opts.partitions ? opts.partitions : 20;
    r = fp_study(opts, data, parts,
                 [&](ChaosSource& chaos, const Rdd& rdd) { return tree_aggregate(chaos, fp, rdd); });
    r.details["reference"] = to_json(foldl_ref(fp.seq, fp.zero, data));
  } else {
    r = run_graph_study(sample_graphs(), opts);
  }
  if (!r.trials.outputs.empty() && opts.name != "cfl" && r.details.contains("reference")) {
    r.details["spread"] = spread(r.trials.outputs);
  }
  r.command = Json{{"case_study", opts.name}, {"seed", opts.seed}, {"trials", opts.trials}};
  r.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

}  // namespace sparkdet::cli
