#include "doctest.h"

#include <set>
#include <utility>

#include "oneperc/mapper.hpp"

using namespace oneperc;

namespace {

using EdgeSet = std::set<std::pair<std::uint64_t, std::uint64_t>>;

MeasurementPattern pattern_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  MeasurementPattern p;
  std::vector<NodeId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(p.graph.add_node(NodeRole::Program));
  for (auto [a, b] : edges) p.graph.add_edge(ids[a], ids[b]);
  p.outputs = ids;  // no measurements: topology-only fixture
  return p;
}

EdgeSet pattern_edges(const MeasurementPattern& p) {
  EdgeSet s;
  for (auto [a, b] : p.graph.edges()) s.insert({a, b});
  return s;
}

MapperConfig grid(int w, int h, double cap = 1.0) {
  MapperConfig cfg;
  cfg.vh = {w, h};
  cfg.occupancy_cap = cap;
  return cfg;
}

// nodes that keep a temporal chain going past their layer were incomplete there
std::map<int, int> extensions_per_layer(const FlexLatticeIR& ir) {
  std::map<int, int> count;
  for (const auto& e : ir.temporal_edges) ++count[e.layer_from];
  return count;
}

}  // namespace

TEST_CASE("mapper config validation") {
  CHECK_NOTHROW(grid(2, 2).validate());
  MapperConfig bad_cap = grid(2, 2, 0.0);
  CHECK_THROWS(bad_cap.validate());
  MapperConfig bad_refresh = grid(2, 2);
  bad_refresh.refresh_interval_layers = 0;
  CHECK_THROWS(bad_refresh.validate());
  CHECK(grid(3, 4).budget() == 7);
}

TEST_CASE("single node pattern maps to one layer") {
  FlexLatticeIR ir = map_program(pattern_from_edges(1, {}), grid(2, 2));
  CHECK(validate_ir(ir).empty());
  CHECK(ir.layer_count == 1);
  CHECK(ir.nodes.size() == 1);
  CHECK(ir.nodes.begin()->second.kind == VNodeKind::Mapped);
  CHECK(ir.spatial_edges.empty());
  CHECK(ir.temporal_edges.empty());
}

TEST_CASE("4-cycle on a 2x2 layer realizes all edges") {
  MeasurementPattern p = pattern_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  FlexLatticeIR ir = map_program(p, grid(2, 2));
  CHECK(validate_ir(ir).empty());
  CHECK(contract_ir(ir) == pattern_edges(p));
  CHECK(ir.layer_count <= 2);
  IrMetrics m = ir_metrics(ir);
  CHECK(m.logical_layers == ir.layer_count);
  CHECK(m.spatial_edges == ir.spatial_edges.size());
}

TEST_CASE("ir metrics counts") {
  CHECK(ir_metrics(FlexLatticeIR{}) == IrMetrics{});

  FlexLatticeIR ir;
  ir.config = {3, 3};
  ir.set_node({1, 1, 0}, VNodeKind::Ancilla);
  ir.set_node({1, 1, 2}, VNodeKind::Mapped, 0);
  ir.temporal_edges.insert({1, 1, 0, 2});
  ir.memory_events.push_back({MemoryEvent::Kind::Store, {1, 1, 0}, {}});
  ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, {1, 1, 0}, {1, 1, 1}});
  IrMetrics m = ir_metrics(ir);
  CHECK(m.logical_layers == 3);
  CHECK(m.temporal_edges == 1);
  CHECK(m.stored_node_layer_spans == std::vector<int>{2});
}

TEST_CASE("branching node carried across layers via its temporal chain") {
  // star K_{1,5} cannot finish on a 3x3 layer without carrying the hub forward
  MeasurementPattern p =
      pattern_from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  FlexLatticeIR ir = map_program(p, grid(3, 3, 0.5));
  CHECK(validate_ir(ir).empty());
  CHECK(contract_ir(ir) == pattern_edges(p));
}

TEST_CASE("semantic preservation on benchmark patterns") {
  for (auto [name, w] : {std::pair{"qft", 6}, {"qaoa", 6}, {"vqe", 5}, {"rca", 5}}) {
    MeasurementPattern p = translate_circuit(build_benchmark(name, 4, 3));
    MapperConfig cfg = grid(w, w, 0.25);
    FlexLatticeIR ir = map_program(p, cfg);
    CHECK(validate_ir(ir).empty());
    CHECK(contract_ir(ir) == pattern_edges(p));

    // occupancy: chain extensions leaving any layer never exceed the cap
    int limit = int(cfg.occupancy_cap * w * w);
    for (auto [layer, k] : extensions_per_layer(ir)) CHECK(k <= limit);

    // scheduling follows the wire order
    std::map<std::uint64_t, int> layer_of;
    for (const auto& [c, node] : ir.nodes) {
      if (node.kind == VNodeKind::Mapped) layer_of[node.g_node] = c.layer;
    }
    for (const auto& wire : p.wires) {
      for (std::size_t i = 0; i + 1 < wire.size(); ++i) {
        CHECK(layer_of.at(wire[i]) <= layer_of.at(wire[i + 1]));
      }
    }
  }
}

TEST_CASE("mapping is deterministic") {
  MeasurementPattern p = translate_circuit(build_benchmark("qaoa", 4, 9));
  FlexLatticeIR a = map_program(p, grid(5, 5, 0.25));
  FlexLatticeIR b = map_program(p, grid(5, 5, 0.25));
  CHECK(ir_to_json(a) == ir_to_json(b));
}

TEST_CASE("refresh interval one still terminates and preserves semantics") {
  MeasurementPattern p = translate_circuit(build_benchmark("vqe", 3, 2));
  MapperConfig cfg = grid(4, 4, 0.5);
  cfg.refresh_interval_layers = 1;
  FlexLatticeIR ir = map_program(p, cfg);
  CHECK(validate_ir(ir).empty());
  CHECK(contract_ir(ir) == pattern_edges(p));
}

TEST_CASE("refresh adds layers but keeps the result correct") {
  MeasurementPattern p = translate_circuit(build_benchmark("qaoa", 4, 5));
  MapperConfig no_refresh = grid(5, 5, 0.25);
  no_refresh.refresh_interval_layers.reset();
  MapperConfig with_refresh = grid(5, 5, 0.25);
  with_refresh.refresh_interval_layers = 5;
  FlexLatticeIR a = map_program(p, no_refresh);
  FlexLatticeIR b = map_program(p, with_refresh);
  CHECK(contract_ir(a) == pattern_edges(p));
  CHECK(contract_ir(b) == pattern_edges(p));
  CHECK(b.layer_count >= a.layer_count);
}

TEST_CASE("structured failures") {
  SUBCASE("occupancy deadlock") {
    MeasurementPattern p = pattern_from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK_THROWS_AS(map_program(p, grid(3, 3, 0.12)), MapperError);
    try {
      map_program(p, grid(3, 3, 0.12));
    } catch (const MapperError& e) {
      CHECK(e.code() == "occupancy-deadlock");
    }
  }
  SUBCASE("unroutable edge under a zero wire budget") {
    MeasurementPattern p = pattern_from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    MapperConfig cfg = grid(2, 2);
    cfg.routing_budget = 0;
    try {
      map_program(p, cfg);
      FAIL("expected a routing failure");
    } catch (const MapperError& e) {
      CHECK(e.code() == "unroutable-edge");
    }
    cfg.routing_budget = -1;  // default budget routes it with a relay
    FlexLatticeIR ir = map_program(p, cfg);
    CHECK(contract_ir(ir) == pattern_edges(p));
  }
}
