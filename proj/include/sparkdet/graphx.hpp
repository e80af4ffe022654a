#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparkdet/combinators.hpp"
#include "sparkdet/error.hpp"

namespace sparkdet {

using VertexId = std::int64_t;

template <class EA>
struct Edge {
  VertexId src;
  VertexId dst;
  EA attr;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// vertices: each VertexId at most once across all partitions.
/// edges: every endpoint must have a vertex entry; multi-edges allowed.
template <class VA, class EA>
struct GraphRdd {
  KeyedRdd<VertexId, VA> vertices;
  std::vector<std::vector<Edge<EA>>> edges;
};

/// Merged message per receiving vertex; vertices without messages are absent.
template <class M>
using MessageRdd = KeyedRdd<VertexId, M>;

template <class M>
using Messages = std::vector<std::pair<VertexId, M>>;

/// Throws InvalidArgument for a repeated vertex id and DanglingEdge for an
/// edge endpoint without a vertex entry.
template <class VA, class EA>
void validate_graph(const GraphRdd<VA, EA>& g) {
  std::set<VertexId> seen;
  for (const auto& part : g.vertices) {
    for (const auto& [id, attr] : part) {
      if (!seen.insert(id).second) {
        throw Error(Errc::invalid_argument, "vertex " + std::to_string(id) + " appears twice");
      }
    }
  }
  for (const auto& part : g.edges) {
    for (const auto& e : part) {
      for (VertexId v : {e.src, e.dst}) {
        if (!seen.count(v)) {
          throw Error(Errc::dangling_edge, "edge (" + std::to_string(e.src) + ", " +
                                               std::to_string(e.dst) + ") names missing vertex " +
                                               std::to_string(v));
        }
      }
    }
  }
}

template <class VA, class EA>
std::vector<VertexId> vertex_ids(const GraphRdd<VA, EA>& g) {
  std::vector<VertexId> ids;
  for (const auto& part : g.vertices) {
    for (const auto& kv : part) ids.push_back(kv.first);
  }
  return ids;
}

/// Flattened vertex map.
template <class VA, class EA>
std::map<VertexId, VA> vertex_map(const GraphRdd<VA, EA>& g) {
  std::map<VertexId, VA> out;
  for (const auto& part : g.vertices) {
    for (const auto& [id, attr] : part) out.emplace(id, attr);
  }
  return out;
}

template <class M>
std::map<VertexId, M> message_map(const MessageRdd<M>& msgs) {
  std::map<VertexId, M> out;
  for (const auto& part : msgs) {
    for (const auto& [id, m] : part) out.emplace(id, m);
  }
  return out;
}

template <class M>
std::size_t message_count(const MessageRdd<M>& msgs) {
  std::size_t n = 0;
  for (const auto& part : msgs) n += part.size();
  return n;
}

template <class M>
std::set<VertexId> message_keys(const MessageRdd<M>& msgs) {
  std::set<VertexId> out;
  for (const auto& part : msgs) {
    for (const auto& kv : part) out.insert(kv.first);
  }
  return out;
}

/// sendMsg is called as send(srcId, srcAttr, dstId, dstAttr, edgeAttr) on
/// every edge with an active endpoint and returns Messages<M>; the messages
/// are merged per vertex with a chaotic reduceByKey.
template <class VA, class EA, class Send, class Merge>
auto aggregate_messages_with_active_set(ChaosSource& chaos, Send&& send, Merge&& merge,
                                        const std::set<VertexId>& active,
                                        const GraphRdd<VA, EA>& g) {
  using M = typename std::invoke_result_t<Send&, VertexId, const VA&, VertexId, const VA&,
                                          const EA&>::value_type::second_type;
  std::unordered_map<VertexId, const VA*> attrs;
  for (const auto& part : g.vertices) {
    for (const auto& [id, attr] : part) attrs.emplace(id, &attr);
  }
  auto attr_of = [&](VertexId v, const Edge<EA>& e) -> const VA& {
    auto it = attrs.find(v);
    if (it == attrs.end()) {
      throw Error(Errc::dangling_edge, "edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                                           ") names missing vertex " + std::to_string(v));
    }
    return *it->second;
  };
  KeyedRdd<VertexId, M> pairs;
  pairs.reserve(g.edges.size());
  for (const auto& part : g.edges) {
    KeyedPartition<VertexId, M> out;
    for (const auto& e : part) {
      if (!active.count(e.src) && !active.count(e.dst)) continue;
      auto sent = send(e.src, attr_of(e.src, e), e.dst, attr_of(e.dst, e), e.attr);
      out.insert(out.end(), sent.begin(), sent.end());
    }
    pairs.push_back(std::move(out));
  }
  return reduce_by_key<VertexId, M>(chaos, pairs, std::forward<Merge>(merge));
}

/// aggregateMessagesWithActiveSet with every vertex active.
template <class VA, class EA, class Send, class Merge>
auto aggregate_messages(ChaosSource& chaos, Send&& send, Merge&& merge, const GraphRdd<VA, EA>& g) {
  const auto ids = vertex_ids(g);
  return aggregate_messages_with_active_set(chaos, std::forward<Send>(send), std::forward<Merge>(merge),
                                            std::set<VertexId>(ids.begin(), ids.end()), g);
}

/// f(id, attr) -> new attribute; partition structure is kept.
template <class VA, class EA, class F>
auto map_vertices(F&& f, const GraphRdd<VA, EA>& g) {
  using VB = std::decay_t<std::invoke_result_t<F&, VertexId, const VA&>>;
  GraphRdd<VB, EA> out;
  out.edges = g.edges;
  out.vertices.reserve(g.vertices.size());
  for (const auto& part : g.vertices) {
    KeyedPartition<VertexId, VB> p;
    p.reserve(part.size());
    for (const auto& [id, attr] : part) p.emplace_back(id, f(id, attr));
    out.vertices.push_back(std::move(p));
  }
  return out;
}

/// joiner(id, attr, msg) for vertices with a message; others keep their attribute.
template <class VA, class EA, class M, class J>
GraphRdd<VA, EA> join_graph(J&& joiner, const GraphRdd<VA, EA>& g, const MessageRdd<M>& msgs) {
  std::unordered_map<VertexId, const M*> assoc;
  for (const auto& part : msgs) {
    for (const auto& [id, m] : part) assoc.emplace(id, &m);
  }
  return map_vertices(
      [&](VertexId id, const VA& attr) -> VA {
        auto it = assoc.find(id);
        return it == assoc.end() ? attr : joiner(id, attr, *it->second);
      },
      g);
}

inline constexpr std::size_t kDefaultMaxIterations = 10'000;

template <class VA, class EA>
struct PregelResult {
  GraphRdd<VA, EA> graph;
  /// Loop iterations run (joins after the initial message round).
  std::size_t iterations = 0;
  /// False when the cap stopped a run that still had messages in flight.
  bool converged = true;
};

/// One step as seen by a pregel observer: `active` is the active set handed
/// to the message round that produced `messages`. Step 0 is the initial
/// round over all vertices.
template <class VA, class EA, class M>
struct PregelStep {
  std::size_t iteration;
  const std::set<VertexId>& active;
  const MessageRdd<M>& messages;
  const GraphRdd<VA, EA>& graph;
};

template <class VA, class EA, class M>
using PregelObserver = std::function<void(const PregelStep<VA, EA, M>&)>;

/// vprog(id, attr, msg) -> attr; send as for aggregate_messages; merge(m, m) -> m.
template <class VA, class EA, class M, class VProg, class Send, class Merge>
PregelResult<VA, EA> pregel(ChaosSource& chaos, const M& init_msg, VProg&& vprog, Send&& send,
                            Merge&& merge, const GraphRdd<VA, EA>& g,
                            std::size_t max_iterations = kDefaultMaxIterations,
                            const PregelObserver<VA, EA, M>& observe = {}) {
  PregelResult<VA, EA> r;
  r.graph = map_vertices([&](VertexId id, const VA& attr) { return vprog(id, attr, init_msg); }, g);
  const auto ids = vertex_ids(r.graph);
  std::set<VertexId> active(ids.begin(), ids.end());
  MessageRdd<M> msgs = aggregate_messages_with_active_set(chaos, send, merge, active, r.graph);
  if (observe) observe(PregelStep<VA, EA, M>{0, active, msgs, r.graph});
  while (message_count(msgs) > 0) {
    if (r.iterations >= max_iterations) {
      r.converged = false;
      break;
    }
    ++r.iterations;
    r.graph = join_graph(vprog, r.graph, msgs);
    active = message_keys(msgs);
    msgs = aggregate_messages_with_active_set(chaos, send, merge, active, r.graph);
    if (observe) observe(PregelStep<VA, EA, M>{r.iterations, active, msgs, r.graph});
  }
  return r;
}

/// Attribute-free graphs as read from edge lists.
using ValueGraph = GraphRdd<Value, Value>;

/// Builds a single-partition graph; endpoints without an entry in `vertices`
/// get `default_attr`.
ValueGraph make_graph(const std::vector<std::pair<VertexId, Value>>& vertices,
                      const std::vector<Edge<Value>>& edges, const Value& default_attr = Value::none());

/// Same graph: equal vertex maps and equal edge multisets.
bool same_graph(const ValueGraph& a, const ValueGraph& b);

/// Rebuilds a graph with its vertex and edge lists cut into the given
/// partitionings (applied to the flattened lists).
ValueGraph restructure(const ValueGraph& g, const Partitioning& vertex_parts,
                       const Partitioning& edge_parts);

// ---------------------------------------------------------------------------
// Algorithms

MessageRdd<std::int64_t> in_degrees(ChaosSource& chaos, const ValueGraph& g);

/// Attribute = smallest VertexId reachable over edges taken as undirected links.
PregelResult<VertexId, Value> connected_components(ChaosSource& chaos, const ValueGraph& g,
                                                   std::size_t max_iterations = kDefaultMaxIterations);

/// Throws EncodingViolation unless every edge has src > dst and no edge repeats.
void check_undirected_encoding(const ValueGraph& g);

/// Triangles through each vertex that has at least one edge.
MessageRdd<std::int64_t> triangle_count(ChaosSource& chaos, const ValueGraph& g);

struct CflState {
  int color = 1;  // 1..k
  std::vector<double> dist;
  bool active = true;
  ChaosSource rng{0};
};

struct CflOptions {
  int k = 3;
  double beta = 0.5;
  std::size_t max_iterations = kDefaultMaxIterations;
  /// Called with the graph after initialisation and after every iteration.
  std::function<void(std::size_t, const GraphRdd<CflState, Value>&)> on_iteration;
};

/// Initial state: colour drawn uniformly with the vertex's own generator
/// (derived from chaos and the VertexId), uniform distribution, active.
CflState cfl_initial(const ChaosSource& chaos, VertexId id, int k);

/// vprog of the colouring: the distribution update for an active or
/// inactive vertex, then a colour draw (kept for inactive vertices).
CflState cfl_update(const CflState& s, bool active, int k, double beta);

/// Colour picked by cumulative mass: 1 + the number of prefix sums below p,
/// clamped to the number of colours.
int sample_color(const std::vector<double>& dist, double p);

PregelResult<CflState, Value> cfl_coloring(ChaosSource& chaos, const ValueGraph& g,
                                           const CflOptions& opts = {});

// Reference answers used to check the algorithms.

std::map<VertexId, VertexId> union_find_components(const ValueGraph& g);
std::map<VertexId, std::int64_t> brute_force_triangles(const ValueGraph& g);
std::map<VertexId, std::int64_t> count_in_degrees(const ValueGraph& g);
bool proper_coloring(const GraphRdd<CflState, Value>& g);
std::size_t max_degree(const ValueGraph& g);

}  // namespace sparkdet
