#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "graphs.hpp"
#include "sparkdet/error.hpp"
#include "sparkdet/graphx.hpp"
#include "sparkdet/registry.hpp"

using namespace sparkdet;
using namespace testv;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

ValueGraph edges_only(std::vector<std::pair<VertexId, VertexId>> es) {
  std::vector<Edge<Value>> out;
  for (auto [a, b] : es) out.push_back({a, b, Value::none()});
  return make_graph({}, out);
}

std::map<VertexId, VertexId> component_map(const PregelResult<VertexId, Value>& r) {
  return vertex_map(r.graph);
}

}  // namespace

TEST_CASE("inDegrees examples") {
  ChaosSource chaos(1);
  CHECK(message_map(in_degrees(chaos, edges_only({{1, 2}, {3, 2}}))) ==
        std::map<VertexId, std::int64_t>{{2, 2}});
  CHECK(message_map(in_degrees(chaos, edges_only({{1, 1}}))) ==
        std::map<VertexId, std::int64_t>{{1, 1}});
}

TEST_CASE("connected components examples") {
  ChaosSource chaos(2);
  auto path = make_graph({{4, Value::none()}}, {{2, 1, Value::none()}, {3, 2, Value::none()}});
  CHECK(component_map(connected_components(chaos, path)) ==
        std::map<VertexId, VertexId>{{1, 1}, {2, 1}, {3, 1}, {4, 4}});
  auto cliques = edges_only({{2, 1}, {4, 3}});
  CHECK(component_map(connected_components(chaos, cliques)) ==
        std::map<VertexId, VertexId>{{1, 1}, {2, 1}, {3, 3}, {4, 3}});
}

TEST_CASE("triangleCount examples and encoding") {
  ChaosSource chaos(3);
  CHECK(message_map(triangle_count(chaos, edges_only({{2, 1}, {3, 1}, {3, 2}}))) ==
        std::map<VertexId, std::int64_t>{{1, 1}, {2, 1}, {3, 1}});
  auto k4 = edges_only({{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}});
  CHECK(message_map(triangle_count(chaos, k4)) ==
        std::map<VertexId, std::int64_t>{{1, 3}, {2, 3}, {3, 3}, {4, 3}});
  CHECK(code_of([&] { triangle_count(chaos, edges_only({{1, 2}})); }) == Errc::encoding_violation);
  CHECK(code_of([&] { triangle_count(chaos, edges_only({{2, 1}, {2, 1}})); }) ==
        Errc::encoding_violation);
}

TEST_CASE("dangling edges and repeated vertices") {
  ChaosSource chaos(4);
  ValueGraph g;
  g.vertices = {{{1, Value::none()}}};
  g.edges = {{{1, 9, Value::none()}}};
  CHECK(code_of([&] { in_degrees(chaos, g); }) == Errc::dangling_edge);
  CHECK(code_of([&] { connected_components(chaos, g); }) == Errc::dangling_edge);
  g.vertices = {{{1, Value::none()}}, {{1, Value::none()}}};
  g.edges = {};
  CHECK(code_of([&] { validate_graph(g); }) == Errc::invalid_argument);
}

TEST_CASE("CFL examples") {
  CflState s;
  s.color = 1;
  s.dist = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto next = cfl_update(s, true, 3, 0.5);
  REQUIRE(next.dist.size() == 3);
  CHECK(next.dist[0] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(next.dist[1] == doctest::Approx(5.0 / 12).epsilon(1e-12));
  CHECK(next.dist[2] == doctest::Approx(5.0 / 12).epsilon(1e-12));
  const auto off = cfl_update(next, false, 3, 0.5);
  for (int i = 1; i <= 3; ++i) CHECK(off.dist[i - 1] == (i == next.color ? 1.0 : 0.0));
  CHECK(off.color == next.color);
  CHECK_FALSE(off.active);

  ChaosSource chaos(5);
  CflOptions one;
  one.k = 1;
  auto single = cfl_coloring(chaos, make_graph({{7, Value::none()}}, {}), one);
  CHECK(single.iterations == 0);
  CHECK(single.converged);
  CHECK(vertex_map(single.graph).at(7).color == 1);
  CHECK(vertex_map(single.graph).at(7).dist == std::vector<double>{1.0});

  auto tri = cfl_coloring(chaos, edges_only({{2, 1}, {3, 1}, {3, 2}}));
  CHECK(tri.converged);
  std::set<int> colors;
  for (const auto& [id, st] : vertex_map(tri.graph)) colors.insert(st.color);
  CHECK(colors.size() == 3);
}

TEST_CASE("sampleColor follows cumulative mass") {
  const std::vector<double> d = {0.25, 0.5, 0.25};
  CHECK(sample_color(d, 0.0) == 1);
  CHECK(sample_color(d, 0.2) == 1);
  CHECK(sample_color(d, 0.3) == 2);
  CHECK(sample_color(d, 0.8) == 3);
  CHECK(sample_color({0.5, 0.49}, 0.999) == 2);
}

TEST_CASE("pregel iteration cap and zero iterations") {
  ChaosSource chaos(6);
  auto path = edges_only({{2, 1}, {3, 2}, {4, 3}});
  auto zero = connected_components(chaos, path, 0);
  CHECK(zero.iterations == 0);
  CHECK_FALSE(zero.converged);
  CHECK(vertex_map(zero.graph).at(4) == 4);
  auto one = connected_components(chaos, path, 1);
  CHECK(one.iterations == 1);
  CHECK_FALSE(one.converged);
  auto full = connected_components(chaos, path);
  CHECK(full.converged);
  auto none = connected_components(chaos, make_graph({{1, Value::none()}}, {}), 0);
  CHECK(none.converged);
}

TEST_CASE("pregel active set is the previous message keys") {
  ChaosSource gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_undirected(gen, 8);
    ChaosSource chaos(100 + trial);
    std::set<VertexId> previous;
    std::size_t steps = 0;
    CflOptions opts;
    opts.k = static_cast<int>(max_degree(g)) + 1;
    auto base = map_vertices(
        [&](VertexId id, const Value&) { return cfl_initial(ChaosSource(9), id, opts.k); }, g);
    auto r = pregel(
        chaos, true,
        [&](VertexId, const CflState& s, bool a) { return cfl_update(s, a, opts.k, opts.beta); },
        [](VertexId src, const CflState& sa, VertexId dst, const CflState& da, const Value&) {
          if (sa.color == da.color) return Messages<bool>{{src, true}, {dst, true}};
          Messages<bool> out;
          if (sa.active) out.emplace_back(src, false);
          if (da.active) out.emplace_back(dst, false);
          return out;
        },
        [](bool a, bool b) { return a || b; }, base, kDefaultMaxIterations,
        PregelObserver<CflState, Value, bool>([&](const auto& step) {
          if (step.iteration == 0) {
            const auto ids = vertex_ids(step.graph);
            CHECK(step.active == std::set<VertexId>(ids.begin(), ids.end()));
          } else {
            CHECK(step.active == previous);
          }
          previous = message_keys(step.messages);
          ++steps;
        }));
    CHECK(r.converged);
    CHECK(steps == r.iterations + 1);
  }
}

TEST_CASE("components and triangles match direct computation on random graphs") {
  ChaosSource gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    ChaosSource chaos(1000 + trial);
    auto multi = random_multigraph(gen, 8, 12);
    CHECK(component_map(connected_components(chaos, multi)) == union_find_components(multi));
    CHECK(message_map(in_degrees(chaos, multi)) == count_in_degrees(multi));
    auto simple = random_undirected(gen, 8);
    CHECK(message_map(triangle_count(chaos, simple)) == brute_force_triangles(simple));
  }
}

TEST_CASE("CFL invariants on connected graphs") {
  ChaosSource gen(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_connected(gen, 1, 8);
    ChaosSource chaos(2000 + trial);
    CflOptions opts;
    opts.k = static_cast<int>(max_degree(g)) + 1;
    bool sums_ok = true;
    opts.on_iteration = [&](std::size_t, const GraphRdd<CflState, Value>& cur) {
      for (const auto& [id, s] : vertex_map(cur)) {
        double total = 0;
        for (double w : s.dist) total += w;
        if (std::abs(total - 1.0) > 1e-9) sums_ok = false;
        if (s.color < 1 || s.color > opts.k) sums_ok = false;
      }
    };
    auto r = cfl_coloring(chaos, g, opts);
    CHECK(sums_ok);
    REQUIRE(r.converged);
    CHECK(proper_coloring(r.graph));
    for (const auto& [id, s] : vertex_map(r.graph)) {
      if (s.active) continue;
      for (int i = 1; i <= opts.k; ++i) CHECK(s.dist[i - 1] == (i == s.color ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("CFL replays from the seed") {
  ChaosSource gen(10);
  auto g = random_connected(gen, 6, 8);
  CflOptions opts;
  opts.k = static_cast<int>(max_degree(g)) + 1;
  ChaosSource a(77), b(77);
  auto ra = cfl_coloring(a, g, opts);
  auto rb = cfl_coloring(b, g, opts);
  CHECK(ra.iterations == rb.iterations);
  auto ma = vertex_map(ra.graph);
  auto mb = vertex_map(rb.graph);
  for (const auto& [id, s] : ma) CHECK(s.color == mb.at(id).color);
}

TEST_CASE("aggregateMessages lookups agree across restructurings") {
  const Operator sum = resolve("sum_i64_wrapping");
  auto send = [&sum](VertexId src, const Value& sa, VertexId dst, const Value& da, const Value& ea) {
    return Messages<Value>{{dst, sum(sa, ea)}, {src, sum(da, Value::integer(src))}};
  };
  auto merge = [&](const Value& a, const Value& b) { return sum(a, b); };
  ChaosSource gen(11);
  for (int trial = 0; trial < 6; ++trial) {
    auto g = random_multigraph(gen, 4, 4);
    ChaosSource first(1);
    const auto expected = message_map(aggregate_messages(first, send, merge, g));
    const auto nv = vertex_ids(g).size();
    std::size_t ne = 0;
    for (const auto& p : g.edges) ne += p.size();
    PartitioningEnumerator vparts(nv, true);
    std::uint64_t run = 0;
    while (auto vp = vparts.next()) {
      PartitioningEnumerator eparts(ne, true);
      while (auto ep = eparts.next()) {
        ChaosSource chaos(run++);
        auto h = restructure(g, *vp, *ep);
        REQUIRE(message_map(aggregate_messages(chaos, send, merge, h)) == expected);
      }
    }
  }
}
