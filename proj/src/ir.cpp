#include "oneperc/ir.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace oneperc {

void VirtualHardwareConfig::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("virtual layer needs width,height >= 1");
  if (photon_lifetime_cycles <= 0) throw std::invalid_argument("photon lifetime must be positive");
}

std::string Coord::to_string() const {
  std::ostringstream os;
  os << "(" << x << ", " << y << ", " << layer << ")";
  return os.str();
}

std::string vnode_kind_name(VNodeKind k) {
  switch (k) {
    case VNodeKind::Mapped: return "mapped";
    case VNodeKind::Ancilla: return "ancilla";
    case VNodeKind::Stored: return "stored";
    case VNodeKind::Unused: return "unused";
  }
  throw std::logic_error("bad vnode kind");
}

namespace {

VNodeKind vnode_kind_from_name(const std::string& s) {
  if (s == "mapped") return VNodeKind::Mapped;
  if (s == "ancilla") return VNodeKind::Ancilla;
  if (s == "stored") return VNodeKind::Stored;
  if (s == "unused") return VNodeKind::Unused;
  throw std::invalid_argument("unknown vnode kind: " + s);
}

}  // namespace

SpatialEdge make_spatial_edge(int x1, int y1, int x2, int y2, int layer) {
  if (std::pair{x1, y1} > std::pair{x2, y2}) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  return SpatialEdge{x1, y1, x2, y2, layer};
}

void FlexLatticeIR::set_node(Coord c, VNodeKind kind, std::uint64_t g_node) {
  nodes[c] = VNode{c, kind, g_node};
  layer_count = std::max(layer_count, c.layer + 1);
}

VNodeKind FlexLatticeIR::kind_at(Coord c) const {
  auto it = nodes.find(c);
  return it == nodes.end() ? VNodeKind::Unused : it->second.kind;
}

std::vector<Violation> validate_ir(const FlexLatticeIR& ir) {
  std::vector<Violation> out;
  auto flag = [&](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };
  auto in_grid = [&](int x, int y) {
    return x >= 0 && x < ir.config.width && y >= 0 && y < ir.config.height;
  };

  std::map<std::uint64_t, int> g_seen;
  for (const auto& [c, node] : ir.nodes) {
    if (!in_grid(c.x, c.y) || c.layer < 0 || c.layer >= ir.layer_count) {
      flag("coord-range", "node at " + c.to_string());
    }
    if (node.coord != c) flag("coord-mismatch", "node keyed at " + c.to_string());
    if (node.kind == VNodeKind::Mapped) ++g_seen[node.g_node];
  }
  for (auto [g, count] : g_seen) {
    if (count > 1) flag("duplicate-g-node", "g" + std::to_string(g));
  }

  for (const auto& e : ir.spatial_edges) {
    if (std::abs(e.x1 - e.x2) + std::abs(e.y1 - e.y2) != 1) {
      flag("spatial-adjacency", "edge at layer " + std::to_string(e.layer));
    }
    if (!in_grid(e.x1, e.y1) || !in_grid(e.x2, e.y2) || e.layer < 0 ||
        e.layer >= ir.layer_count) {
      flag("coord-range", "spatial edge at layer " + std::to_string(e.layer));
    }
    for (Coord c : {Coord{e.x1, e.y1, e.layer}, Coord{e.x2, e.y2, e.layer}}) {
      if (ir.kind_at(c) == VNodeKind::Unused) flag("missing-endpoint", c.to_string());
    }
  }

  std::map<Coord, int> t_out, t_in;
  for (const auto& e : ir.temporal_edges) {
    Coord from{e.x, e.y, e.layer_from}, to{e.x, e.y, e.layer_to};
    if (e.layer_from >= e.layer_to) {
      flag("temporal-order", from.to_string() + " -> " + to.to_string());
      continue;
    }
    if (!in_grid(e.x, e.y) || e.layer_from < 0 || e.layer_to >= ir.layer_count) {
      flag("coord-range", "temporal edge " + from.to_string());
    }
    ++t_out[from];
    ++t_in[to];
    for (Coord c : {from, to}) {
      if (ir.kind_at(c) == VNodeKind::Unused) flag("missing-endpoint", c.to_string());
    }
    if (e.layer_to - e.layer_from >= 2) {
      bool stored = false, retrieved = false;
      for (const auto& ev : ir.memory_events) {
        stored = stored || (ev.kind == MemoryEvent::Kind::Store && ev.node == from);
        retrieved = retrieved ||
                    (ev.kind == MemoryEvent::Kind::Retrieve && ev.node == from &&
                     ev.position == Coord{e.x, e.y, e.layer_to - 1});
      }
      if (!stored || !retrieved) {
        flag("unbacked-cross-layer", from.to_string() + " -> " + to.to_string());
      }
    }
  }
  for (auto& [c, k] : t_out) {
    if (k > 1) flag("temporal-out-degree", c.to_string());
  }
  for (auto& [c, k] : t_in) {
    if (k > 1) flag("temporal-in-degree", c.to_string());
  }
  return out;
}

std::string Instruction::to_string() const {
  switch (op) {
    case Op::MapVNode: return "map_v_node(" + a.to_string() + ", g" + std::to_string(g_node) + ")";
    case Op::MakeAncilla: return "make_v_node_ancilla(" + a.to_string() + ")";
    case Op::Store: return "store_v_node(" + a.to_string() + ")";
    case Op::Retrieve: return "retrieve_v_node(" + a.to_string() + ", " + b.to_string() + ")";
    case Op::EnableSpatial:
      return "enable_spatial_v_edge(" + a.to_string() + ", " + b.to_string() + ")";
    case Op::EnableTemporal:
      return "enable_temporal_v_edge(" + a.to_string() + ", " + b.to_string() + ")";
  }
  throw std::logic_error("bad instruction op");
}

InstructionProgram emit_instructions(const FlexLatticeIR& ir) {
  if (!validate_ir(ir).empty()) throw std::invalid_argument("cannot emit an invalid IR");
  InstructionProgram p;
  for (int layer = 0; layer < ir.layer_count; ++layer) {
    // declarations, row-major
    std::vector<const VNode*> decls;
    for (const auto& [c, node] : ir.nodes) {
      if (c.layer == layer) decls.push_back(&node);
    }
    std::sort(decls.begin(), decls.end(), [](const VNode* a, const VNode* b) {
      return std::pair{a->coord.y, a->coord.x} < std::pair{b->coord.y, b->coord.x};
    });
    for (const VNode* n : decls) {
      if (n->kind == VNodeKind::Mapped) {
        p.instructions.push_back({Instruction::Op::MapVNode, n->coord, {}, n->g_node});
      } else if (n->kind == VNodeKind::Ancilla) {
        p.instructions.push_back({Instruction::Op::MakeAncilla, n->coord, {}, 0});
      }
      // Stored nodes are declared by their store event, Unused by absence.
    }
    for (const auto& e : ir.spatial_edges) {
      if (e.layer != layer) continue;
      p.instructions.push_back({Instruction::Op::EnableSpatial,
                                Coord{e.x1, e.y1, layer},
                                Coord{e.x2, e.y2, layer}, 0});
    }
    // stores for cross-layer edges leaving this layer
    for (const auto& e : ir.temporal_edges) {
      if (e.layer_from != layer || e.layer_to - e.layer_from < 2) continue;
      p.instructions.push_back({Instruction::Op::Store, Coord{e.x, e.y, layer}, {}, 0});
    }
    // retrieves + temporal enables landing on layer+1
    for (const auto& e : ir.temporal_edges) {
      if (e.layer_to != layer + 1) continue;
      Coord from{e.x, e.y, e.layer_from}, hop{e.x, e.y, layer}, to{e.x, e.y, layer + 1};
      if (e.layer_to - e.layer_from >= 2) {
        p.instructions.push_back({Instruction::Op::Retrieve, from, hop, 0});
      }
      p.instructions.push_back({Instruction::Op::EnableTemporal, hop, to, 0});
    }
  }
  return p;
}

std::string serialize_program(const InstructionProgram& p) {
  std::ostringstream os;
  for (const auto& ins : p.instructions) os << ins.to_string() << "\n";
  return os.str();
}

namespace {

struct LineParser {
  const std::string& s;
  std::size_t pos = 0;
  int line_no;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
  }
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  int number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return std::stoi(s.substr(start, pos - start));
  }
  Coord coord() {
    expect('(');
    Coord c;
    c.x = number();
    expect(',');
    c.y = number();
    expect(',');
    c.layer = number();
    expect(')');
    return c;
  }
  std::uint64_t g_id() {
    skip_ws();
    if (pos >= s.size() || s[pos] != 'g') fail("expected g<id>");
    ++pos;
    return static_cast<std::uint64_t>(number());
  }
};

}  // namespace

InstructionProgram parse_program(const std::string& text) {
  InstructionProgram p;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    LineParser lp{line, first, line_no};
    std::size_t open = line.find('(', first);
    if (open == std::string::npos) lp.fail("expected name(args)");
    std::string name = line.substr(first, open - first);
    lp.pos = open;
    Instruction ins{};
    if (name == "map_v_node") {
      ins.op = Instruction::Op::MapVNode;
      lp.expect('(');
      ins.a = lp.coord();
      lp.expect(',');
      ins.g_node = lp.g_id();
      lp.expect(')');
    } else if (name == "make_v_node_ancilla") {
      ins.op = Instruction::Op::MakeAncilla;
      lp.expect('(');
      ins.a = lp.coord();
      lp.expect(')');
    } else if (name == "store_v_node") {
      ins.op = Instruction::Op::Store;
      lp.expect('(');
      ins.a = lp.coord();
      lp.expect(')');
    } else if (name == "retrieve_v_node") {
      ins.op = Instruction::Op::Retrieve;
      lp.expect('(');
      ins.a = lp.coord();
      lp.expect(',');
      ins.b = lp.coord();
      lp.expect(')');
    } else if (name == "enable_spatial_v_edge" || name == "enable_temporal_v_edge") {
      ins.op = name == "enable_spatial_v_edge" ? Instruction::Op::EnableSpatial
                                               : Instruction::Op::EnableTemporal;
      lp.expect('(');
      ins.a = lp.coord();
      lp.expect(',');
      ins.b = lp.coord();
      lp.expect(')');
    } else {
      lp.fail("unknown instruction " + name);
    }
    lp.skip_ws();
    if (lp.pos != line.find_last_not_of(" \t\r") + 1) lp.fail("trailing garbage");
    p.instructions.push_back(ins);
  }
  return p;
}

FlexLatticeIR replay_program(const InstructionProgram& p, const VirtualHardwareConfig& cfg) {
  FlexLatticeIR ir;
  ir.config = cfg;
  std::map<Coord, Coord> retrieved_at;  // position -> original stored node
  auto touch_layer = [&](const Coord& c) {
    ir.layer_count = std::max(ir.layer_count, c.layer + 1);
  };
  for (const auto& ins : p.instructions) {
    switch (ins.op) {
      case Instruction::Op::MapVNode:
        ir.set_node(ins.a, VNodeKind::Mapped, ins.g_node);
        break;
      case Instruction::Op::MakeAncilla:
        ir.set_node(ins.a, VNodeKind::Ancilla);
        break;
      case Instruction::Op::Store:
        ir.memory_events.push_back({MemoryEvent::Kind::Store, ins.a, {}});
        touch_layer(ins.a);
        break;
      case Instruction::Op::Retrieve:
        ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, ins.a, ins.b});
        retrieved_at[ins.b] = ins.a;
        touch_layer(ins.b);
        break;
      case Instruction::Op::EnableSpatial:
        if (ins.a.layer != ins.b.layer) throw std::invalid_argument("spatial edge across layers");
        ir.spatial_edges.insert(
            make_spatial_edge(ins.a.x, ins.a.y, ins.b.x, ins.b.y, ins.a.layer));
        touch_layer(ins.a);
        break;
      case Instruction::Op::EnableTemporal: {
        if (ins.a.x != ins.b.x || ins.a.y != ins.b.y) {
          throw std::invalid_argument("temporal edge must keep its 2D coordinate");
        }
        auto it = retrieved_at.find(ins.a);
        int from = it == retrieved_at.end() ? ins.a.layer : it->second.layer;
        ir.temporal_edges.insert(TemporalEdge{ins.a.x, ins.a.y, from, ins.b.layer});
        touch_layer(ins.b);
        break;
      }
    }
  }
  return ir;
}

std::string ir_to_json(const FlexLatticeIR& ir) {
  nlohmann::json j;
  j["schema"] = "flexlattice-ir/1";
  j["config"] = {{"width", ir.config.width},
                 {"height", ir.config.height},
                 {"memory_per_site", ir.config.memory_per_site},
                 {"photon_lifetime_cycles", ir.config.photon_lifetime_cycles}};
  j["layer_count"] = ir.layer_count;
  j["nodes"] = nlohmann::json::array();
  for (const auto& [c, n] : ir.nodes) {
    nlohmann::json node = {{"x", c.x}, {"y", c.y}, {"layer", c.layer},
                           {"kind", vnode_kind_name(n.kind)}};
    if (n.kind == VNodeKind::Mapped) node["g_node"] = n.g_node;
    j["nodes"].push_back(node);
  }
  j["spatial_edges"] = nlohmann::json::array();
  for (const auto& e : ir.spatial_edges) {
    j["spatial_edges"].push_back({e.x1, e.y1, e.x2, e.y2, e.layer});
  }
  j["temporal_edges"] = nlohmann::json::array();
  for (const auto& e : ir.temporal_edges) {
    j["temporal_edges"].push_back({e.x, e.y, e.layer_from, e.layer_to});
  }
  j["memory_events"] = nlohmann::json::array();
  for (const auto& ev : ir.memory_events) {
    nlohmann::json je = {{"kind", ev.kind == MemoryEvent::Kind::Store ? "store" : "retrieve"},
                         {"node", {ev.node.x, ev.node.y, ev.node.layer}}};
    if (ev.kind == MemoryEvent::Kind::Retrieve) {
      je["position"] = {ev.position.x, ev.position.y, ev.position.layer};
    }
    j["memory_events"].push_back(je);
  }
  return j.dump(2) + "\n";
}

FlexLatticeIR ir_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema") != "flexlattice-ir/1") {
    throw std::invalid_argument("unsupported IR schema");
  }
  FlexLatticeIR ir;
  const auto& jc = j.at("config");
  ir.config.width = jc.at("width");
  ir.config.height = jc.at("height");
  ir.config.memory_per_site = jc.at("memory_per_site");
  ir.config.photon_lifetime_cycles = jc.at("photon_lifetime_cycles");
  ir.config.validate();
  ir.layer_count = j.at("layer_count");
  for (const auto& jn : j.at("nodes")) {
    VNode n;
    n.coord = Coord{jn.at("x"), jn.at("y"), jn.at("layer")};
    n.kind = vnode_kind_from_name(jn.at("kind"));
    if (n.kind == VNodeKind::Mapped) n.g_node = jn.at("g_node");
    ir.nodes[n.coord] = n;
  }
  for (const auto& je : j.at("spatial_edges")) {
    ir.spatial_edges.insert(SpatialEdge{je.at(0), je.at(1), je.at(2), je.at(3), je.at(4)});
  }
  for (const auto& je : j.at("temporal_edges")) {
    ir.temporal_edges.insert(TemporalEdge{je.at(0), je.at(1), je.at(2), je.at(3)});
  }
  for (const auto& je : j.at("memory_events")) {
    MemoryEvent ev;
    ev.kind = je.at("kind") == "store" ? MemoryEvent::Kind::Store : MemoryEvent::Kind::Retrieve;
    ev.node = Coord{je.at("node").at(0), je.at("node").at(1), je.at("node").at(2)};
    if (ev.kind == MemoryEvent::Kind::Retrieve) {
      ev.position =
          Coord{je.at("position").at(0), je.at("position").at(1), je.at("position").at(2)};
    }
    ir.memory_events.push_back(ev);
  }
  return ir;
}

}  // namespace oneperc
