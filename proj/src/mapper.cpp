#include "oneperc/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace oneperc {

void MapperConfig::validate() const {
  vh.validate();
  if (!(occupancy_cap > 0.0) || occupancy_cap > 1.0) {
    throw std::invalid_argument("occupancy cap must be in (0, 1]");
  }
  if (refresh_interval_layers && *refresh_interval_layers < 1) {
    throw std::invalid_argument("refresh interval must be >= 1");
  }
}

namespace {

struct Mapper {
  const MeasurementPattern& p;
  const MapperConfig& cfg;
  int W, H, cap_limit, budget;
  DependencyDag dag;

  FlexLatticeIR ir;
  std::map<NodeId, std::set<NodeId>> pending;  // unrealized neighbors per node
  std::size_t pending_edges = 0;
  std::set<NodeId> placed;
  std::map<NodeId, Coord> head;  // chain tip of each placed node
  int layer = -1;
  std::vector<char> occupied;          // current layer grid
  std::set<NodeId> incomplete_here;    // incomplete nodes with an instance here
  std::vector<NodeId> refresh_queue;   // stored nodes awaiting retrieval
  int progress = 0;                    // placements + routed edges this layer
  std::string block_code, block_detail;

  Mapper(const MeasurementPattern& pat, const MapperConfig& c)
      : p(pat), cfg(c), W(c.vh.width), H(c.vh.height),
        cap_limit(std::max(0, int(std::floor(c.occupancy_cap * W * H + 1e-9)))),
        budget(c.budget()), dag(dependency_dag(pat)) {
    ir.config = cfg.vh;
    for (NodeId v : p.graph.nodes()) pending[v] = p.graph.neighbors(v);
    pending_edges = p.graph.edge_count();
  }

  bool free_cell(int x, int y) const { return !occupied[std::size_t(y) * W + x]; }
  void take_cell(int x, int y) { occupied[std::size_t(y) * W + x] = 1; }

  bool cap_allows(NodeId g) const {
    return incomplete_here.count(g) || int(incomplete_here.size()) < cap_limit;
  }

  void block(std::string code, std::string detail) {
    block_code = std::move(code);
    block_detail = std::move(detail);
  }

  std::string edge_name(NodeId a, NodeId b) const {
    return "g" + std::to_string(std::min(a, b)) + "-g" + std::to_string(std::max(a, b)) +
           " at layer " + std::to_string(layer);
  }

  // Extend g's temporal chain onto the current layer at its head coordinate.
  bool land_head(NodeId g) {
    Coord h = head.at(g);
    if (h.layer == layer) return true;
    if (!free_cell(h.x, h.y)) {
      block("occupancy-deadlock", "cell for g" + std::to_string(g) + " taken, layer " +
                                      std::to_string(layer));
      return false;
    }
    if (!cap_allows(g)) {
      block("occupancy-deadlock", "layer " + std::to_string(layer));
      return false;
    }
    Coord landed{h.x, h.y, layer};
    ir.set_node(landed, VNodeKind::Ancilla);
    ir.temporal_edges.insert({h.x, h.y, h.layer, layer});
    if (layer - h.layer >= 2) {
      ir.memory_events.push_back({MemoryEvent::Kind::Store, h, {}});
      ir.memory_events.push_back({MemoryEvent::Kind::Retrieve, h, {h.x, h.y, layer - 1}});
    }
    take_cell(h.x, h.y);
    head[g] = landed;
    incomplete_here.insert(g);
    return true;
  }

  void mark_realized(NodeId a, NodeId b) {
    pending[a].erase(b);
    pending[b].erase(a);
    --pending_edges;
    for (NodeId v : {a, b}) {
      if (pending[v].empty()) incomplete_here.erase(v);
    }
  }

  // Spatial wire path on the current layer between the two landed heads.
  bool route(NodeId a, NodeId b) {
    Coord s = head.at(a), t = head.at(b);
    std::vector<int> prev(std::size_t(W) * H, -1);
    std::deque<std::pair<int, int>> q{{s.x, s.y}};
    std::vector<char> seen(std::size_t(W) * H, 0);
    seen[std::size_t(s.y) * W + s.x] = 1;
    bool found = false;
    while (!q.empty() && !found) {
      auto [cx, cy] = q.front();
      q.pop_front();
      for (auto [dx, dy] : {std::pair{0, -1}, {1, 0}, {0, 1}, {-1, 0}}) {
        int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        std::size_t idx = std::size_t(ny) * W + nx;
        if (seen[idx]) continue;
        if (nx == t.x && ny == t.y) {
          seen[idx] = 1;
          prev[idx] = int(std::size_t(cy) * W + cx);
          found = true;
          break;
        }
        if (!free_cell(nx, ny)) continue;
        seen[idx] = 1;
        prev[idx] = int(std::size_t(cy) * W + cx);
        q.push_back({nx, ny});
      }
    }
    if (!found) {
      block("unroutable-edge", edge_name(a, b));
      return false;
    }
    std::vector<std::pair<int, int>> path;  // t back to s, exclusive
    for (int idx = prev[std::size_t(t.y) * W + t.x]; idx != int(std::size_t(s.y) * W + s.x);
         idx = prev[idx]) {
      path.push_back({idx % W, idx / W});
    }
    if (int(path.size()) > budget) {
      block("unroutable-edge", edge_name(a, b));
      return false;
    }
    Coord from = t;
    for (auto [x, y] : path) {
      ir.set_node({x, y, layer}, VNodeKind::Ancilla);
      take_cell(x, y);
      ir.spatial_edges.insert(make_spatial_edge(from.x, from.y, x, y, layer));
      from = {x, y, layer};
    }
    ir.spatial_edges.insert(make_spatial_edge(from.x, from.y, s.x, s.y, layer));
    mark_realized(a, b);
    ++progress;
    return true;
  }

  // Try to realize every pending edge whose endpoints are both placed.
  bool resolve_edges() {
    std::vector<std::pair<NodeId, NodeId>> todo;
    for (const auto& [v, rest] : pending) {
      for (NodeId u : rest) {
        if (v < u && placed.count(v) && placed.count(u)) todo.push_back({v, u});
      }
    }
    bool any = false;
    for (auto [a, b] : todo) {
      if (!land_head(a) || !land_head(b)) continue;
      any |= route(a, b);
    }
    return any;
  }

  bool place_front() {
    std::vector<NodeId> front = dag.front_layer(placed);
    std::stable_sort(front.begin(), front.end(), [&](NodeId a, NodeId b) {
      auto placed_degree = [&](NodeId v) {
        int k = 0;
        for (NodeId u : p.graph.neighbors(v)) k += placed.count(u);
        return k;
      };
      int da = placed_degree(a), db = placed_degree(b);
      return da != db ? da > db : a < b;
    });
    bool any = false;
    for (NodeId n : front) {
      if (!pending[n].empty() && !cap_allows(n)) {
        block("occupancy-deadlock", "layer " + std::to_string(layer));
        continue;
      }
      // A placed neighbor's chain can only reach this node by landing at its
      // own (x, y), so that column must stay clear of the new node.
      std::set<std::pair<int, int>> reserved;
      for (NodeId u : pending[n]) {
        if (placed.count(u)) {
          const Coord& h = head.at(u);
          if (h.layer != layer) reserved.insert({h.x, h.y});
        }
      }
      // cheapest free cell by summed distance to placed neighbors' heads
      long best_cost = -1;
      int bx = -1, by = -1;
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          if (!free_cell(x, y) || reserved.count({x, y})) continue;
          long cost = 0;
          for (NodeId u : p.graph.neighbors(n)) {
            if (!placed.count(u)) continue;
            const Coord& h = head.at(u);
            cost += std::abs(h.x - x) + std::abs(h.y - y);
          }
          if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            bx = x;
            by = y;
          }
        }
      }
      if (best_cost < 0) {
        block("layer-full", "layer " + std::to_string(layer));
        break;
      }
      ir.set_node({bx, by, layer}, VNodeKind::Mapped, n);
      take_cell(bx, by);
      head[n] = {bx, by, layer};
      placed.insert(n);
      if (!pending[n].empty()) incomplete_here.insert(n);
      ++progress;
      any = true;
    }
    return any;
  }

  void run_refresh_queue() {
    std::vector<NodeId> still;
    for (NodeId g : refresh_queue) {
      if (pending[g].empty()) continue;  // completed meanwhile
      if (!land_head(g)) still.push_back(g);
    }
    refresh_queue = std::move(still);
  }

  FlexLatticeIR run() {
    while (placed.size() < p.graph.node_count() || pending_edges > 0) {
      ++layer;
      occupied.assign(std::size_t(W) * H, 0);
      incomplete_here.clear();
      progress = 0;
      block_code.clear();

      if (cfg.refresh_interval_layers && layer > 0 && refresh_queue.empty() &&
          layer % *cfg.refresh_interval_layers == 0) {
        for (const auto& [g, rest] : pending) {
          if (!rest.empty() && placed.count(g) && head.at(g).layer < layer) {
            refresh_queue.push_back(g);
          }
        }
      }
      if (!refresh_queue.empty()) {
        std::size_t before = refresh_queue.size();
        run_refresh_queue();
        if (!refresh_queue.empty()) {
          if (refresh_queue.size() == before) {
            throw MapperError("occupancy-deadlock", "refresh at layer " + std::to_string(layer));
          }
          continue;  // dedicate further layers to the refresh
        }
      }

      bool moving = true;
      while (moving) {
        moving = false;
        moving |= resolve_edges();
        moving |= place_front();
      }
      if (progress == 0) {
        if (block_code.empty()) block("occupancy-deadlock", "layer " + std::to_string(layer));
        throw MapperError(block_code, block_detail);
      }
    }
    if (ir.layer_count == 0) ir.layer_count = 1;
    // Order memory events the way program emission schedules them: per layer,
    // stores first, then retrieves (keyed by the layer they execute on).
    std::stable_sort(ir.memory_events.begin(), ir.memory_events.end(),
                     [](const MemoryEvent& a, const MemoryEvent& b) {
                       auto key = [](const MemoryEvent& e) {
                         bool retrieve = e.kind == MemoryEvent::Kind::Retrieve;
                         int exec_layer = retrieve ? e.position.layer : e.node.layer;
                         return std::tuple{exec_layer, retrieve, e.node.x, e.node.y,
                                           e.node.layer};
                       };
                       return key(a) < key(b);
                     });
    return std::move(ir);
  }
};

}  // namespace

FlexLatticeIR map_program(const MeasurementPattern& p, const MapperConfig& cfg) {
  cfg.validate();
  p.validate();
  return Mapper(p, cfg).run();
}

IrMetrics ir_metrics(const FlexLatticeIR& ir) {
  IrMetrics m;
  m.logical_layers = ir.layer_count;
  m.spatial_edges = ir.spatial_edges.size();
  m.temporal_edges = ir.temporal_edges.size();
  for (const auto& e : ir.temporal_edges) {
    if (e.layer_to - e.layer_from >= 2) {
      m.stored_node_layer_spans.push_back(e.layer_to - e.layer_from);
    }
  }
  std::sort(m.stored_node_layer_spans.begin(), m.stored_node_layer_spans.end());
  return m;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = int(i);
  }
  int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::set<std::pair<std::uint64_t, std::uint64_t>> contract_ir(const FlexLatticeIR& ir) {
  std::map<Coord, int> index;
  std::vector<const VNode*> by_index;
  for (const auto& [c, n] : ir.nodes) {
    index[c] = int(by_index.size());
    by_index.push_back(&n);
  }
  Dsu dsu(by_index.size());
  for (const auto& e : ir.temporal_edges) {
    dsu.unite(index.at({e.x, e.y, e.layer_from}), index.at({e.x, e.y, e.layer_to}));
  }
  // one mapped node per temporal chain
  std::map<int, std::uint64_t> label;
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    if (by_index[i]->kind != VNodeKind::Mapped) continue;
    int r = dsu.find(int(i));
    if (label.count(r)) throw std::logic_error("temporal chain joins two program nodes");
    label[r] = by_index[i]->g_node;
  }
  // spatial adjacency between chain components
  std::map<int, std::vector<int>> adj;
  for (const auto& e : ir.spatial_edges) {
    int a = dsu.find(index.at({e.x1, e.y1, e.layer}));
    int b = dsu.find(index.at({e.x2, e.y2, e.layer}));
    if (a == b) {
      if (!label.count(a)) throw std::logic_error("spatial edge inside a wire component");
      continue;  // internal to one program node's chain
    }
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::pair<std::uint64_t, std::uint64_t>> result;
  auto add_edge = [&](std::uint64_t g, std::uint64_t h) {
    if (g == h) throw std::logic_error("contraction produced a self edge");
    result.insert({std::min(g, h), std::max(g, h)});
  };
  std::set<int> walked;
  for (const auto& [comp, nbrs] : adj) {
    if (label.count(comp)) {
      for (int nb : nbrs) {
        if (label.count(nb)) add_edge(label.at(comp), label.at(nb));
      }
      continue;
    }
    // wire ancilla chain: walk from an unvisited wire component to both ends
    if (nbrs.size() != 2) throw std::logic_error("wire ancilla of degree != 2");
    if (walked.count(comp)) continue;
    std::uint64_t ends[2];
    for (int dir = 0; dir < 2; ++dir) {
      int prev = comp, cur = nbrs[dir];
      while (!label.count(cur)) {
        walked.insert(cur);
        const auto& cn = adj.at(cur);
        if (cn.size() != 2) throw std::logic_error("wire ancilla of degree != 2");
        int next = cn[0] == prev ? cn[1] : cn[0];
        if (next == comp) throw std::logic_error("wire cycle without program nodes");
        prev = cur;
        cur = next;
      }
      ends[dir] = label.at(cur);
    }
    walked.insert(comp);
    add_edge(ends[0], ends[1]);
  }
  return result;
}

}  // namespace oneperc
