#include <algorithm>
#include <map>
#include <set>

#include "sparkdet/graphx.hpp"

namespace sparkdet {

ValueGraph make_graph(const std::vector<std::pair<VertexId, Value>>& vertices,
                      const std::vector<Edge<Value>>& edges, const Value& default_attr) {
  ValueGraph g;
  KeyedPartition<VertexId, Value> vs;
  std::set<VertexId> seen;
  for (const auto& [id, attr] : vertices) {
    if (!seen.insert(id).second) {
      throw Error(Errc::invalid_argument, "vertex " + std::to_string(id) + " appears twice");
    }
    vs.emplace_back(id, attr);
  }
  for (const auto& e : edges) {
    for (VertexId v : {e.src, e.dst}) {
      if (seen.insert(v).second) vs.emplace_back(v, default_attr);
    }
  }
  g.vertices.push_back(std::move(vs));
  g.edges.push_back(edges);
  return g;
}

namespace {

std::vector<std::tuple<VertexId, VertexId, Value>> edge_multiset(const ValueGraph& g) {
  std::vector<std::tuple<VertexId, VertexId, Value>> out;
  for (const auto& part : g.edges) {
    for (const auto& e : part) out.emplace_back(e.src, e.dst, e.attr);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class T>
std::vector<T> flat(const std::vector<std::vector<T>>& parts) {
  std::vector<T> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

bool same_graph(const ValueGraph& a, const ValueGraph& b) {
  return vertex_map(a) == vertex_map(b) && edge_multiset(a) == edge_multiset(b);
}

ValueGraph restructure(const ValueGraph& g, const Partitioning& vertex_parts,
                       const Partitioning& edge_parts) {
  const auto vs = flat(g.vertices);
  const auto es = flat(g.edges);
  if (vertex_parts.order.size() != vs.size() || edge_parts.order.size() != es.size()) {
    throw Error(Errc::invalid_argument, "partitioning does not match the graph size");
  }
  ValueGraph out;
  out.vertices = vertex_parts.apply(vs);
  out.edges = edge_parts.apply(es);
  return out;
}

}  // namespace sparkdet
