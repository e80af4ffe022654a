#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gen.hpp"
#include "sparkdet/graphx.hpp"

namespace testv {

using sparkdet::Edge;
using sparkdet::ValueGraph;
using sparkdet::VertexId;

/// Vertices 1..n (n in [1, max_vertices]) and up to max_edges directed edges,
/// self-loops and repeats allowed, cut into random partitions.
inline ValueGraph random_multigraph(ChaosSource& s, std::size_t max_vertices, std::size_t max_edges) {
  const auto n = static_cast<VertexId>(1 + s.uniform(max_vertices));
  std::vector<std::pair<VertexId, Value>> vs;
  for (VertexId v = 1; v <= n; ++v) vs.emplace_back(v, Value::integer(small_int(s, -3, 3)));
  std::vector<Edge<Value>> es;
  const auto m = s.uniform(max_edges + 1);
  for (std::uint64_t i = 0; i < m; ++i) {
    es.push_back({small_int(s, 1, n), small_int(s, 1, n), Value::integer(small_int(s, -3, 3))});
  }
  auto g = sparkdet::make_graph(vs, es);
  auto vp = sparkdet::random_partitioning(s, vs.size());
  auto ep = sparkdet::random_partitioning(s, es.size());
  return sparkdet::restructure(g, vp, ep);
}

/// Simple undirected graph on 1..n encoded with src > dst, each pair kept
/// with probability 1/2, randomly partitioned.
inline ValueGraph random_undirected(ChaosSource& s, std::size_t max_vertices) {
  const auto n = static_cast<VertexId>(1 + s.uniform(max_vertices));
  std::vector<std::pair<VertexId, Value>> vs;
  for (VertexId v = 1; v <= n; ++v) vs.emplace_back(v, Value::none());
  std::vector<Edge<Value>> es;
  for (VertexId a = 1; a <= n; ++a) {
    for (VertexId b = 1; b < a; ++b) {
      if (s.uniform(2) == 0) es.push_back({a, b, Value::none()});
    }
  }
  auto g = sparkdet::make_graph(vs, es);
  return sparkdet::restructure(g, sparkdet::random_partitioning(s, vs.size()),
                               sparkdet::random_partitioning(s, es.size()));
}

/// Connected simple graph: a random spanning tree plus random extra edges.
inline ValueGraph random_connected(ChaosSource& s, std::size_t min_vertices, std::size_t max_vertices) {
  const auto n = static_cast<VertexId>(min_vertices + s.uniform(max_vertices - min_vertices + 1));
  std::vector<std::pair<VertexId, Value>> vs;
  for (VertexId v = 1; v <= n; ++v) vs.emplace_back(v, Value::none());
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n + 1),
                                      std::vector<bool>(static_cast<std::size_t>(n + 1), false));
  std::vector<Edge<Value>> es;
  auto add = [&](VertexId a, VertexId b) {
    if (a < b) std::swap(a, b);
    if (a == b || used[a][b]) return;
    used[a][b] = true;
    es.push_back({a, b, Value::none()});
  };
  for (VertexId v = 2; v <= n; ++v) add(v, small_int(s, 1, v - 1));
  const auto extra = s.uniform(static_cast<std::uint64_t>(n) + 1);
  for (std::uint64_t i = 0; i < extra; ++i) add(small_int(s, 1, n), small_int(s, 1, n));
  auto g = sparkdet::make_graph(vs, es);
  return sparkdet::restructure(g, sparkdet::random_partitioning(s, vs.size()),
                               sparkdet::random_partitioning(s, es.size()));
}

}  // namespace testv
