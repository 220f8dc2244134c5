#include "oneperc/graphstate.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace oneperc {

std::string role_name(NodeRole r) {
  switch (r) {
    case NodeRole::Unassigned: return "unassigned";
    case NodeRole::Root: return "root";
    case NodeRole::Leaf: return "leaf";
    case NodeRole::Program: return "program";
    case NodeRole::Ancilla: return "ancilla";
  }
  throw std::logic_error("bad role");
}

NodeRole role_from_name(const std::string& s) {
  if (s == "unassigned") return NodeRole::Unassigned;
  if (s == "root") return NodeRole::Root;
  if (s == "leaf") return NodeRole::Leaf;
  if (s == "program") return NodeRole::Program;
  if (s == "ancilla") return NodeRole::Ancilla;
  throw std::invalid_argument("unknown role: " + s);
}

void GraphState::require_node(NodeId v) const {
  if (!has_node(v)) throw std::invalid_argument("unknown node id " + std::to_string(v));
}

NodeId GraphState::add_node(NodeRole role) {
  NodeId id = next_id_++;
  nodes_.insert(id);
  adj_[id];
  roles_[id] = role;
  return id;
}

void GraphState::add_edge(NodeId u, NodeId v) {
  require_node(u);
  require_node(v);
  if (u == v) throw std::invalid_argument("self loops are not allowed");
  adj_[u].insert(v);
  adj_[v].insert(u);
}

void GraphState::toggle_edge(NodeId u, NodeId v) {
  require_node(u);
  require_node(v);
  if (u == v) throw std::invalid_argument("self loops are not allowed");
  if (adj_[u].erase(v)) {
    adj_[v].erase(u);
  } else {
    adj_[u].insert(v);
    adj_[v].insert(u);
  }
}

bool GraphState::has_edge(NodeId u, NodeId v) const {
  auto it = adj_.find(u);
  return it != adj_.end() && it->second.count(v) != 0;
}

std::size_t GraphState::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [v, nb] : adj_) twice += nb.size();
  return twice / 2;
}

std::vector<std::pair<NodeId, NodeId>> GraphState::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [v, nb] : adj_) {
    for (NodeId u : nb) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

const std::set<NodeId>& GraphState::neighbors(NodeId v) const {
  require_node(v);
  return adj_.at(v);
}

void GraphState::set_role(NodeId v, NodeRole r) {
  require_node(v);
  roles_[v] = r;
}

NodeRole GraphState::role(NodeId v) const {
  require_node(v);
  return roles_.at(v);
}

void GraphState::set_basis(NodeId v, const MeasurementBasis& b) {
  require_node(v);
  basis_.insert_or_assign(v, b);
}

void GraphState::clear_basis(NodeId v) {
  require_node(v);
  basis_.erase(v);
}

std::optional<MeasurementBasis> GraphState::basis(NodeId v) const {
  require_node(v);
  auto it = basis_.find(v);
  if (it == basis_.end()) return std::nullopt;
  return it->second;
}

const ByproductWord& GraphState::byproducts(NodeId v) const {
  require_node(v);
  static const ByproductWord kEmpty;
  auto it = byproducts_.find(v);
  return it == byproducts_.end() ? kEmpty : it->second;
}

void GraphState::append_byproduct(NodeId v, ByproductGen g) {
  require_node(v);
  byproducts_[v].append(g);
}

void GraphState::remove_node(NodeId v) {
  for (NodeId u : adj_.at(v)) adj_.at(u).erase(v);
  adj_.erase(v);
  nodes_.erase(v);
  basis_.erase(v);
  byproducts_.erase(v);
  roles_.erase(v);
}

bool GraphState::same_topology(const GraphState& other) const {
  return nodes_ == other.nodes_ && adj_ == other.adj_;
}

GraphState local_complement(const GraphState& g, NodeId v) {
  g.require_node(v);
  GraphState out = g;
  std::vector<NodeId> nb(g.neighbors(v).begin(), g.neighbors(v).end());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      out.toggle_edge(nb[i], nb[j]);
    }
  }
  return out;
}

GraphState measure_z(const GraphState& g, NodeId v) {
  g.require_node(v);
  GraphState out = g;
  out.remove_node(v);
  return out;
}

GraphState fuse_success(const GraphState& g, NodeId q1, NodeId q2) {
  g.require_node(q1);
  g.require_node(q2);
  if (q1 == q2) throw std::invalid_argument("fusion needs two distinct qubits");
  if (g.has_edge(q1, q2)) {
    throw std::invalid_argument("fused qubits must come from different clusters");
  }
  GraphState out = g;
  for (NodeId u : g.neighbors(q1)) {
    for (NodeId w : g.neighbors(q2)) {
      if (u != w) out.toggle_edge(u, w);
    }
  }
  out.remove_node(q1);
  out.remove_node(q2);
  return out;
}

namespace {

// Removes one fusion photon: LC-based removal for degree >= 2 (recording
// UZ+/- on former neighbors per the outcome bit), Z-removal otherwise.
void remove_fused_photon(GraphState& g, NodeId q, int outcome) {
  std::vector<NodeId> nb(g.neighbors(q).begin(), g.neighbors(q).end());
  if (nb.size() >= 2) {
    g = local_complement(g, q);
    for (NodeId u : nb) {
      g.append_byproduct(u, outcome == 0 ? ByproductGen::Zp : ByproductGen::Zm);
    }
  }
  g = measure_z(g, q);
}

}  // namespace

GraphState fuse_fail(const GraphState& g, NodeId q1, NodeId q2, int outcome1, int outcome2) {
  g.require_node(q1);
  g.require_node(q2);
  if (q1 == q2) throw std::invalid_argument("fusion needs two distinct qubits");
  if (g.has_edge(q1, q2)) {
    throw std::invalid_argument("fused qubits must come from different clusters");
  }
  GraphState out = g;
  remove_fused_photon(out, q1, outcome1);
  remove_fused_photon(out, q2, outcome2);
  return out;
}

GraphState make_star(int k) {
  if (k < 2) throw std::invalid_argument("star resource state needs k >= 2 qubits");
  GraphState g;
  NodeId root = g.add_node(NodeRole::Root);
  for (int i = 1; i < k; ++i) {
    NodeId leaf = g.add_node(NodeRole::Leaf);
    g.add_edge(root, leaf);
  }
  return g;
}

std::string serialize_graph(const GraphState& g) {
  std::ostringstream os;
  os << g.node_count() << "\n";
  // ids are renumbered densely in ascending order
  std::map<NodeId, std::size_t> index;
  for (NodeId v : g.nodes()) index.emplace(v, index.size());
  for (auto [u, v] : g.edges()) os << index.at(u) << " " << index.at(v) << "\n";
  for (NodeId v : g.nodes()) {
    os << "# node " << index.at(v) << " role=" << role_name(g.role(v));
    if (auto b = g.basis(v)) {
      os << " plane=" << pauli_char(b->plane_first()) << pauli_char(b->plane_second())
         << " angle=" << b->angle();
    }
    os << "\n";
  }
  return os.str();
}

GraphState parse_graph(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty graph file");
  std::size_t n = std::stoul(line);
  GraphState g;
  std::vector<NodeId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(g.add_node());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "#") {
      std::string what;
      ls >> what;
      if (what != "node") continue;
      std::size_t idx;
      ls >> idx;
      if (idx >= n) throw std::invalid_argument("annotation for unknown node");
      std::string kv;
      std::optional<std::string> plane;
      std::optional<double> angle;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "role") g.set_role(ids[idx], role_from_name(val));
        if (key == "plane") plane = val;
        if (key == "angle") angle = std::stod(val);
      }
      if (plane && angle) {
        g.set_basis(ids[idx], MeasurementBasis(pauli_from_char((*plane)[0]),
                                               pauli_from_char((*plane)[1]), *angle));
      }
    } else {
      std::size_t u = std::stoul(tok), v;
      ls >> v;
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      g.add_edge(ids[u], ids[v]);
    }
  }
  return g;
}

}  // namespace oneperc
