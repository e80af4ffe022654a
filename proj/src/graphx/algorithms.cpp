#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "sparkdet/graphx.hpp"

namespace sparkdet {

MessageRdd<std::int64_t> in_degrees(ChaosSource& chaos, const ValueGraph& g) {
  return aggregate_messages(
      chaos,
      [](VertexId, const Value&, VertexId dst, const Value&, const Value&) {
        return Messages<std::int64_t>{{dst, 1}};
      },
      [](std::int64_t a, std::int64_t b) { return a + b; }, g);
}

PregelResult<VertexId, Value> connected_components(ChaosSource& chaos, const ValueGraph& g,
                                                   std::size_t max_iterations) {
  validate_graph(g);
  const auto base = map_vertices([](VertexId id, const Value&) { return id; }, g);
  return pregel(
      chaos, std::numeric_limits<VertexId>::max(),
      [](VertexId, VertexId attr, VertexId msg) { return std::min(attr, msg); },
      [](VertexId src, VertexId src_a, VertexId dst, VertexId dst_a, const Value&) {
        if (src_a < dst_a) return Messages<VertexId>{{dst, src_a}};
        if (dst_a < src_a) return Messages<VertexId>{{src, dst_a}};
        return Messages<VertexId>{};
      },
      [](VertexId a, VertexId b) { return std::min(a, b); }, base, max_iterations);
}

void check_undirected_encoding(const ValueGraph& g) {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      const std::string edge = "(" + std::to_string(e.src) + ", " + std::to_string(e.dst) + ")";
      if (e.src <= e.dst) throw Error(Errc::encoding_violation, "edge " + edge + " needs src > dst");
      if (!seen.emplace(e.src, e.dst).second) {
        throw Error(Errc::encoding_violation, "edge " + edge + " repeats");
      }
    }
  }
}

MessageRdd<std::int64_t> triangle_count(ChaosSource& chaos, const ValueGraph& g) {
  check_undirected_encoding(g);
  validate_graph(g);
  using Adj = std::set<VertexId>;
  const auto neighbours = aggregate_messages(
      chaos,
      [](VertexId src, const Value&, VertexId dst, const Value&, const Value&) {
        return Messages<Adj>{{dst, Adj{src}}, {src, Adj{dst}}};
      },
      [](Adj a, const Adj& b) {
        a.insert(b.begin(), b.end());
        return a;
      },
      g);
  const auto adj = message_map(neighbours);
  const auto with_adj = map_vertices(
      [&](VertexId v, const Value&) {
        auto it = adj.find(v);
        if (it == adj.end()) return Adj{};
        Adj out = it->second;
        out.erase(v);
        return out;
      },
      g);
  auto sums = aggregate_messages(
      chaos,
      [](VertexId src, const Adj& src_a, VertexId dst, const Adj& dst_a, const Value&) {
        std::int64_t num = 0;
        for (VertexId v : src_a) num += dst_a.count(v);
        return Messages<std::int64_t>{{dst, num}, {src, num}};
      },
      [](std::int64_t a, std::int64_t b) { return a + b; }, with_adj);
  for (auto& part : sums) {
    for (auto& kv : part) kv.second /= 2;
  }
  return sums;
}

CflState cfl_initial(const ChaosSource& chaos, VertexId id, int k) {
  if (k < 1) throw Error(Errc::invalid_argument, "colour count must be at least 1");
  CflState s;
  s.rng = chaos.derive(static_cast<std::uint64_t>(id));
  s.color = 1 + static_cast<int>(s.rng.uniform(static_cast<std::uint64_t>(k)));
  s.dist.assign(static_cast<std::size_t>(k), 1.0 / k);
  s.active = true;
  return s;
}

int sample_color(const std::vector<double>& dist, double p) {
  int color = 1;
  double mass = 0.0;
  for (double w : dist) {
    const double m = mass + w;
    if (m < p) ++color;
    mass = m;
  }
  return std::min(color, static_cast<int>(dist.size()));
}

CflState cfl_update(const CflState& s, bool active, int k, double beta) {
  CflState out = s;
  out.dist.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = 1; i <= k; ++i) {
    const std::size_t j = static_cast<std::size_t>(i - 1);
    if (active && k == 1) {
      out.dist[j] = 1.0;
    } else if (active) {
      const double decay = s.dist[j] * (1.0 - beta);
      out.dist[j] = decay + (s.color == i ? 0.0 : beta / (k - 1));
    } else {
      out.dist[j] = s.color == i ? 1.0 : 0.0;
    }
  }
  const double p = out.rng.uniform01();
  out.color = active ? sample_color(out.dist, p) : s.color;
  out.active = active;
  return out;
}

PregelResult<CflState, Value> cfl_coloring(ChaosSource& chaos, const ValueGraph& g,
                                           const CflOptions& opts) {
  if (opts.k < 1) throw Error(Errc::invalid_argument, "colour count must be at least 1");
  if (!(opts.beta >= 0.0 && opts.beta <= 1.0)) {
    throw Error(Errc::invalid_argument, "beta must lie in [0, 1]");
  }
  validate_graph(g);
  const int k = opts.k;
  const double beta = opts.beta;
  const ChaosSource vertex_rngs = chaos.split();
  const auto init = map_vertices(
      [&](VertexId id, const Value&) { return cfl_initial(vertex_rngs, id, k); }, g);
  PregelObserver<CflState, Value, bool> observe;
  if (opts.on_iteration) {
    observe = [&](const PregelStep<CflState, Value, bool>& step) {
      opts.on_iteration(step.iteration, step.graph);
    };
  }
  return pregel(
      chaos, true,
      [k, beta](VertexId, const CflState& s, bool active) { return cfl_update(s, active, k, beta); },
      [](VertexId src, const CflState& src_a, VertexId dst, const CflState& dst_a, const Value&) {
        if (src_a.color == dst_a.color) return Messages<bool>{{src, true}, {dst, true}};
        Messages<bool> out;
        if (src_a.active) out.emplace_back(src, false);
        if (dst_a.active) out.emplace_back(dst, false);
        return out;
      },
      [](bool a, bool b) { return a || b; }, init, opts.max_iterations, observe);
}

std::map<VertexId, VertexId> union_find_components(const ValueGraph& g) {
  const auto ids = vertex_ids(g);
  std::map<VertexId, VertexId> parent;
  for (VertexId v : ids) parent[v] = v;
  auto find = [&](VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      VertexId a = find(e.src);
      VertexId b = find(e.dst);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent[b] = a;
    }
  }
  std::map<VertexId, VertexId> out;
  for (VertexId v : ids) out[v] = find(v);
  return out;
}

std::map<VertexId, std::int64_t> brute_force_triangles(const ValueGraph& g) {
  std::map<VertexId, std::set<VertexId>> adj;
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      adj[e.src];
      adj[e.dst];
      if (e.src == e.dst) continue;
      adj[e.src].insert(e.dst);
      adj[e.dst].insert(e.src);
    }
  }
  std::vector<VertexId> vs;
  for (const auto& kv : adj) vs.push_back(kv.first);
  std::map<VertexId, std::int64_t> out;
  for (VertexId v : vs) out[v] = 0;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (!adj[vs[a]].count(vs[b])) continue;
      for (std::size_t c = b + 1; c < vs.size(); ++c) {
        if (adj[vs[a]].count(vs[c]) && adj[vs[b]].count(vs[c])) {
          ++out[vs[a]];
          ++out[vs[b]];
          ++out[vs[c]];
        }
      }
    }
  }
  return out;
}

std::map<VertexId, std::int64_t> count_in_degrees(const ValueGraph& g) {
  std::map<VertexId, std::int64_t> out;
  for (const auto& part : g.edges) {
    for (const auto& e : part) ++out[e.dst];
  }
  return out;
}

bool proper_coloring(const GraphRdd<CflState, Value>& g) {
  const auto attrs = vertex_map(g);
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      if (e.src != e.dst && attrs.at(e.src).color == attrs.at(e.dst).color) return false;
    }
  }
  return true;
}

std::size_t max_degree(const ValueGraph& g) {
  std::map<VertexId, std::size_t> deg;
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      ++deg[e.src];
      ++deg[e.dst];
    }
  }
  std::size_t best = 0;
  for (const auto& kv : deg) best = std::max(best, kv.second);
  return best;
}

}  // namespace sparkdet
