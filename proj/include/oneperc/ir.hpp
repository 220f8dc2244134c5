#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oneperc {

struct VirtualHardwareConfig {
  int width = 1;
  int height = 1;
  long long memory_per_site = -1;  // negative = unbounded
  int photon_lifetime_cycles = 5000;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const VirtualHardwareConfig&) const = default;
};

struct Coord {
  int x = 0;
  int y = 0;
  int layer = 0;

  auto operator<=>(const Coord&) const = default;
  std::string to_string() const;  // "(x, y, layer)"
};

enum class VNodeKind { Mapped, Ancilla, Stored, Unused };

std::string vnode_kind_name(VNodeKind k);

struct VNode {
  Coord coord;
  VNodeKind kind = VNodeKind::Unused;
  std::uint64_t g_node = 0;  // Mapped only

  bool operator==(const VNode&) const = default;
};

// Same-layer edge between 4-adjacent cells; endpoints stored in sorted order.
struct SpatialEdge {
  int x1, y1, x2, y2, layer;
  auto operator<=>(const SpatialEdge&) const = default;
};

SpatialEdge make_spatial_edge(int x1, int y1, int x2, int y2, int layer);

// Edge between the same 2D coordinate on two layers (adjacent or, when backed
// by memory events, further apart).
struct TemporalEdge {
  int x, y, layer_from, layer_to;
  auto operator<=>(const TemporalEdge&) const = default;
};

struct MemoryEvent {
  enum class Kind { Store, Retrieve } kind;
  Coord node;      // the stored node's original coordinate
  Coord position;  // Retrieve only: where it re-materializes
  bool operator==(const MemoryEvent&) const = default;
};

struct Violation {
  std::string code;
  std::string detail;
};

struct FlexLatticeIR {
  VirtualHardwareConfig config;
  int layer_count = 0;
  std::map<Coord, VNode> nodes;  // absent cells are Unused
  std::set<SpatialEdge> spatial_edges;
  std::set<TemporalEdge> temporal_edges;
  std::vector<MemoryEvent> memory_events;

  void set_node(Coord c, VNodeKind kind, std::uint64_t g_node = 0);
  VNodeKind kind_at(Coord c) const;
  bool operator==(const FlexLatticeIR&) const = default;
};

std::vector<Violation> validate_ir(const FlexLatticeIR& ir);

struct Instruction {
  enum class Op { MapVNode, MakeAncilla, Store, Retrieve, EnableSpatial, EnableTemporal } op;
  Coord a;
  Coord b;                   // Retrieve position / edge partner
  std::uint64_t g_node = 0;  // MapVNode only

  bool operator==(const Instruction&) const = default;
  std::string to_string() const;
};

struct InstructionProgram {
  std::vector<Instruction> instructions;

  bool operator==(const InstructionProgram&) const = default;
};

// Deterministic lowering: per layer, declarations (row-major), spatial-edge
// enables, stores, retrieves, temporal-edge enables. A cross-layer edge m->n
// becomes store at m, retrieve at n-1, enable_temporal (n-1, n).
InstructionProgram emit_instructions(const FlexLatticeIR& ir);

std::string serialize_program(const InstructionProgram& p);
InstructionProgram parse_program(const std::string& text);

// Abstract replay of a program back into an IR (node kinds, edges, memory
// events); inverse of emit_instructions for valid IRs.
FlexLatticeIR replay_program(const InstructionProgram& p, const VirtualHardwareConfig& cfg);

// Versioned JSON round-trip for IR files.
std::string ir_to_json(const FlexLatticeIR& ir);
FlexLatticeIR ir_from_json(const std::string& text);

}  // namespace oneperc
