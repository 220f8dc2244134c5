#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oneperc/basis.hpp"

namespace oneperc {

using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Unassigned = 0, Root, Leaf, Program, Ancilla };

std::string role_name(NodeRole r);
NodeRole role_from_name(const std::string& s);

// Labeled undirected graph with per-node measurement basis, role, and pending
// Clifford byproducts. Node ids are allocated monotonically and never reused,
// so rewrite traces are replayable.
class GraphState {
 public:
  GraphState() = default;

  NodeId add_node(NodeRole role = NodeRole::Unassigned);
  bool has_node(NodeId v) const { return nodes_.count(v) != 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::set<NodeId>& nodes() const { return nodes_; }

  void add_edge(NodeId u, NodeId v);
  void toggle_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;
  std::size_t edge_count() const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;  // u < v, sorted

  const std::set<NodeId>& neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  void set_role(NodeId v, NodeRole r);
  NodeRole role(NodeId v) const;

  void set_basis(NodeId v, const MeasurementBasis& b);
  void clear_basis(NodeId v);
  std::optional<MeasurementBasis> basis(NodeId v) const;

  const ByproductWord& byproducts(NodeId v) const;
  void append_byproduct(NodeId v, ByproductGen g);

  bool same_topology(const GraphState& other) const;

 private:
  friend GraphState measure_z(const GraphState&, NodeId);
  friend GraphState fuse_success(const GraphState&, NodeId, NodeId);
  friend GraphState fuse_fail(const GraphState&, NodeId, NodeId, int, int);
  friend GraphState local_complement(const GraphState&, NodeId);

  void require_node(NodeId v) const;
  void remove_node(NodeId v);

  std::set<NodeId> nodes_;
  std::map<NodeId, std::set<NodeId>> adj_;
  std::map<NodeId, MeasurementBasis> basis_;
  std::map<NodeId, ByproductWord> byproducts_;
  std::map<NodeId, NodeRole> roles_;
  NodeId next_id_ = 0;
};

// Toggles every edge among the neighbors of v. Involution at every vertex.
GraphState local_complement(const GraphState& g, NodeId v);

// Removes v and its incident edges (Z-measurement, outcome 0 convention).
GraphState measure_z(const GraphState& g, NodeId v);

// Successful type-II fusion of q1 and q2: toggles the complete bipartite edge
// set between their neighborhoods, then deletes both photons.
GraphState fuse_success(const GraphState& g, NodeId q1, NodeId q2);

// Failed fusion: each photon of degree >= 2 is removed after a local
// complementation, recording UZ+/- byproducts (per its sampled outcome bit)
// on its former neighbors; degree <= 1 photons are plain Z-removals.
GraphState fuse_fail(const GraphState& g, NodeId q1, NodeId q2, int outcome1 = 0,
                     int outcome2 = 0);

// Star resource state on k qubits: root of degree k-1 (lowest id) plus leaves.
GraphState make_star(int k);

// Edge-list text format with a role/basis annotation section; test fixtures.
std::string serialize_graph(const GraphState& g);
GraphState parse_graph(const std::string& text);

}  // namespace oneperc
