#include "doctest.h"

#include <algorithm>
#include <set>
#include <utility>

#include "oneperc/ir.hpp"
#include "oneperc/rng.hpp"

using namespace oneperc;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

// the worked cross-layer example: ancilla at (1,1,0) tied to mapped node at (1,1,2)
FlexLatticeIR cross_layer_example() {
  FlexLatticeIR ir;
  ir.config = {3, 3};
  ir.set_node({1, 1, 0}, VNodeKind::Ancilla);
  ir.set_node({1, 1, 2}, VNodeKind::Mapped, 0);
  ir.temporal_edges.insert({1, 1, 0, 2});
  ir.memory_events.push_back({MemoryEvent::Kind::Store, {1, 1, 0}, {}});
  ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, {1, 1, 0}, {1, 1, 1}});
  return ir;
}

FlexLatticeIR random_ir(Rng& rng) {
  FlexLatticeIR ir;
  ir.config = {4, 4};
  int layers = 2 + int(rng_below(rng, 3));
  std::uint64_t next_g = 0;
  for (int l = 0; l < layers; ++l) {
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 4; ++x) {
        if (rng_below(rng, 2)) continue;
        if (rng_below(rng, 2)) {
          ir.set_node({x, y, l}, VNodeKind::Mapped, next_g++);
        } else {
          ir.set_node({x, y, l}, VNodeKind::Ancilla);
        }
      }
    }
  }
  ir.layer_count = layers;
  for (const auto& [c, n] : ir.nodes) {
    for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
      Coord o{c.x + dx, c.y + dy, c.layer};
      if (ir.nodes.count(o) && rng_below(rng, 2)) {
        ir.spatial_edges.insert(make_spatial_edge(c.x, c.y, o.x, o.y, c.layer));
      }
    }
  }
  std::set<Coord> has_out, has_in;
  for (const auto& [c, n] : ir.nodes) {
    if (has_out.count(c)) continue;
    for (int gap = 1; gap <= 2; ++gap) {
      Coord to{c.x, c.y, c.layer + gap};
      if (!ir.nodes.count(to) || has_in.count(to) || rng_below(rng, 2)) continue;
      ir.temporal_edges.insert({c.x, c.y, c.layer, to.layer});
      has_out.insert(c);
      has_in.insert(to);
      if (gap >= 2) {
        ir.memory_events.push_back({MemoryEvent::Kind::Store, c, {}});
        ir.memory_events.push_back(
            {MemoryEvent::Kind::Retrieve, c, {c.x, c.y, to.layer - 1}});
      }
      break;
    }
  }
  if (!ir.nodes.count({0, 0, layers - 1})) {
    ir.set_node({0, 0, layers - 1}, VNodeKind::Ancilla);
  }
  return ir;
}

}  // namespace

TEST_CASE("hardware config and coordinates") {
  VirtualHardwareConfig ok{2, 2};
  VirtualHardwareConfig zero_width{0, 2};
  VirtualHardwareConfig zero_lifetime{2, 2, -1, 0};
  CHECK_NOTHROW(ok.validate());
  CHECK_THROWS(zero_width.validate());
  CHECK_THROWS(zero_lifetime.validate());
  Coord c{3, 1, 4};
  CHECK(c.to_string() == "(3, 1, 4)");
}

TEST_CASE("validate_ir catches invariant violations") {
  CHECK(validate_ir(FlexLatticeIR{}).empty());
  CHECK(validate_ir(cross_layer_example()).empty());

  SUBCASE("two temporal edges into one node") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({0, 0, 0}, VNodeKind::Ancilla);
    ir.set_node({0, 0, 1}, VNodeKind::Ancilla);
    ir.set_node({0, 0, 2}, VNodeKind::Ancilla);
    ir.temporal_edges.insert({0, 0, 0, 2});
    ir.temporal_edges.insert({0, 0, 1, 2});
    ir.memory_events.push_back({MemoryEvent::Kind::Store, {0, 0, 0}, {}});
    ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, {0, 0, 0}, {0, 0, 1}});
    CHECK(has_violation(validate_ir(ir), "temporal-in-degree"));
  }
  SUBCASE("two temporal edges out of one node") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({0, 0, 0}, VNodeKind::Ancilla);
    ir.set_node({0, 0, 1}, VNodeKind::Ancilla);
    ir.set_node({0, 0, 2}, VNodeKind::Ancilla);
    ir.temporal_edges.insert({0, 0, 0, 1});
    ir.temporal_edges.insert({0, 0, 0, 2});
    ir.memory_events.push_back({MemoryEvent::Kind::Store, {0, 0, 0}, {}});
    ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, {0, 0, 0}, {0, 0, 1}});
    CHECK(has_violation(validate_ir(ir), "temporal-out-degree"));
  }
  SUBCASE("cross-layer edge without memory backing") {
    FlexLatticeIR ir = cross_layer_example();
    ir.memory_events.clear();
    CHECK(has_violation(validate_ir(ir), "unbacked-cross-layer"));
  }
  SUBCASE("node outside the grid") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({5, 0, 0}, VNodeKind::Ancilla);
    CHECK(has_violation(validate_ir(ir), "coord-range"));
  }
  SUBCASE("repeated program node") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({0, 0, 0}, VNodeKind::Mapped, 3);
    ir.set_node({1, 0, 0}, VNodeKind::Mapped, 3);
    CHECK(has_violation(validate_ir(ir), "duplicate-g-node"));
  }
  SUBCASE("spatial edge between non-adjacent cells") {
    FlexLatticeIR ir;
    ir.config = {3, 3};
    ir.set_node({0, 0, 0}, VNodeKind::Ancilla);
    ir.set_node({2, 0, 0}, VNodeKind::Ancilla);
    ir.spatial_edges.insert(make_spatial_edge(0, 0, 2, 0, 0));
    CHECK(has_violation(validate_ir(ir), "spatial-adjacency"));
  }
  SUBCASE("edge endpoint with no node") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.layer_count = 1;
    ir.set_node({0, 0, 0}, VNodeKind::Ancilla);
    ir.spatial_edges.insert(make_spatial_edge(0, 0, 1, 0, 0));
    CHECK(has_violation(validate_ir(ir), "missing-endpoint"));
  }
}

TEST_CASE("cross-layer example emits the canonical sequence") {
  InstructionProgram p = emit_instructions(cross_layer_example());
  CHECK(serialize_program(p) ==
        "make_v_node_ancilla((1, 1, 0))\n"
        "store_v_node((1, 1, 0))\n"
        "retrieve_v_node((1, 1, 0), (1, 1, 1))\n"
        "enable_temporal_v_edge((1, 1, 1), (1, 1, 2))\n"
        "map_v_node((1, 1, 2), g0)\n");
}

TEST_CASE("small emission examples") {
  SUBCASE("single mapped node") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({0, 1, 0}, VNodeKind::Mapped, 4);
    InstructionProgram p = emit_instructions(ir);
    REQUIRE(p.instructions.size() == 1);
    CHECK(p.instructions[0].to_string() == "map_v_node((0, 1, 0), g4)");
  }
  SUBCASE("two adjacent mapped nodes with an edge") {
    FlexLatticeIR ir;
    ir.config = {2, 2};
    ir.set_node({0, 0, 0}, VNodeKind::Mapped, 0);
    ir.set_node({1, 0, 0}, VNodeKind::Mapped, 1);
    ir.spatial_edges.insert(make_spatial_edge(0, 0, 1, 0, 0));
    InstructionProgram p = emit_instructions(ir);
    CHECK(serialize_program(p) ==
          "map_v_node((0, 0, 0), g0)\n"
          "map_v_node((1, 0, 0), g1)\n"
          "enable_spatial_v_edge((0, 0, 0), (1, 0, 0))\n");
  }
  SUBCASE("emission rejects an invalid IR") {
    FlexLatticeIR ir = cross_layer_example();
    ir.memory_events.clear();
    CHECK_THROWS(emit_instructions(ir));
  }
}

TEST_CASE("program text round-trips with line-numbered errors") {
  std::string text =
      "map_v_node((1, 1, 2), g9)\n"
      "make_v_node_ancilla((1, 1, 0))\n"
      "store_v_node((1, 1, 0))\n"
      "retrieve_v_node((1, 1, 0), (1, 1, 1))\n"
      "enable_spatial_v_edge((0, 0, 0), (1, 0, 0))\n"
      "enable_temporal_v_edge((1, 1, 1), (1, 1, 2))\n";
  InstructionProgram p = parse_program(text);
  CHECK(p.instructions.size() == 6);
  CHECK(serialize_program(p) == text);
  CHECK(serialize_program(parse_program(serialize_program(p))) == serialize_program(p));

  InstructionProgram one = parse_program("map_v_node((0,0,0), g7)\n");
  REQUIRE(one.instructions.size() == 1);
  CHECK(one.instructions[0].g_node == 7);
  Coord origin{0, 0, 0};
  CHECK(one.instructions[0].a == origin);

  CHECK(parse_program("").instructions.empty());
  CHECK(parse_program("# comment\n\n").instructions.empty());
  CHECK_THROWS_WITH_AS(parse_program("store_v_node((0, 0, 0))\ndrop_v_node((0, 0, 0))\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS(parse_program("map_v_node((0, 0, 0))\n"));      // missing g id
  CHECK_THROWS(parse_program("store_v_node((0, 0))\n"));       // 2D coordinate
  CHECK_THROWS(parse_program("store_v_node((0, 0, 0)) junk\n"));
}

TEST_CASE("emission is lossless and deterministic") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    FlexLatticeIR ir = random_ir(rng);
    REQUIRE(validate_ir(ir).empty());
    InstructionProgram p = emit_instructions(ir);
    CHECK(serialize_program(p) == serialize_program(emit_instructions(ir)));
    FlexLatticeIR back = replay_program(p, ir.config);
    CHECK(back.nodes == ir.nodes);
    CHECK(back.spatial_edges == ir.spatial_edges);
    CHECK(back.temporal_edges == ir.temporal_edges);
    CHECK(back.layer_count == ir.layer_count);
    // round-trip through text is also exact
    CHECK(serialize_program(parse_program(serialize_program(p))) == serialize_program(p));
  }
}

TEST_CASE("json files round-trip the full IR") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    FlexLatticeIR ir = random_ir(rng);
    FlexLatticeIR back = ir_from_json(ir_to_json(ir));
    CHECK(back == ir);
  }
  CHECK_THROWS(ir_from_json("{\"schema\": \"other/9\"}"));
}
