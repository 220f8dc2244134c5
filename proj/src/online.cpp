#include "oneperc/online.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oneperc {

void HardwareConfig::validate() const {
  if (rsl_width < 1 || rsl_height < 1) throw std::invalid_argument("rsl size must be positive");
  if (resource_state_size < 2) throw std::invalid_argument("resource_state_size must be >= 2");
  if (p_fusion < 0.0 || p_fusion > 1.0) throw std::invalid_argument("p_fusion outside [0, 1]");
  if (p_loss < 0.0 || p_loss > 1.0) throw std::invalid_argument("p_loss outside [0, 1]");
  if (retry_batches < 0) throw std::invalid_argument("retry_batches must be >= 0");
  if (photon_lifetime_cycles < 1) throw std::invalid_argument("photon_lifetime_cycles must be >= 1");
}

void RenormConfig::validate() const {
  if (node_size < 1) throw std::invalid_argument("node_size must be >= 1");
  if (module_count < 1) throw std::invalid_argument("module_count must be >= 1");
  if (!(mi_ratio > 0.0)) throw std::invalid_argument("mi_ratio must be positive");
}

int merge_factor(int resource_state_size, int required_degree) {
  const int s = resource_state_size;
  if (s < 2) throw std::invalid_argument("resource_state_size must be >= 2");
  if (required_degree <= s - 1) return 1;
  if (s == 2) throw std::invalid_argument("merging 2-photon states cannot raise the degree");
  const int need = required_degree - (s - 1);
  return 1 + (need + s - 3) / (s - 2);
}

bool MergedLayer::has_bond(int x1, int y1, int x2, int y2) const {
  if (x1 == x2) {
    if (y2 == y1 + 1) return bond_down[site(x1, y1)] != 0;
    if (y1 == y2 + 1) return bond_down[site(x2, y2)] != 0;
    return false;
  }
  if (y1 == y2) {
    if (x2 == x1 + 1) return bond_right[site(x1, y1)] != 0;
    if (x1 == x2 + 1) return bond_right[site(x2, y2)] != 0;
  }
  return false;
}

BuildResult build_merged_layer(const HardwareConfig& cfg, Rng& rng) {
  cfg.validate();
  const int W = cfg.rsl_width, H = cfg.rsl_height, s = cfg.resource_state_size;
  const double p = cfg.p_eff();
  const int m = merge_factor(s, kRequiredDegree);

  BuildResult out;
  MergedLayer& L = out.layer;
  L.width = W;
  L.height = H;
  const std::size_t sites = std::size_t(W) * H;
  L.bond_right.assign(sites, 0);
  L.bond_down.assign(sites, 0);
  L.spare_degree.assign(sites, s - 1);
  L.repairs.assign(sites, ByproductWord{});

  // Root-leaf merges growing each site's cluster to the required degree.
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int i = L.site(x, y);
      for (int k = 1; k < m; ++k) {
        if (L.spare_degree[i] < 1) break;  // no free leaf left to fuse on
        ++out.fusions;
        if (rng_bernoulli(rng, p)) {
          L.spare_degree[i] += s - 2;
        } else {
          L.spare_degree[i] -= 1;
          L.repairs[i].append(rng_bernoulli(rng, 0.5) ? ByproductGen::Zm : ByproductGen::Zp);
        }
      }
    }
  }

  // One leaf-leaf fusion per adjacent pair, then optional retry batches on
  // failed bonds while both sides still have spare leaves.
  auto attempt = [&](int a, int b, std::vector<char>& bond, int idx) {
    if (L.spare_degree[a] < 1 || L.spare_degree[b] < 1) return;
    ++out.fusions;
    --L.spare_degree[a];
    --L.spare_degree[b];
    bond[idx] = rng_bernoulli(rng, p) ? 1 : 0;
  };
  for (int pass = 0; pass <= cfg.retry_batches; ++pass) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int i = L.site(x, y);
        if (x + 1 < W && L.bond_right[i] == 0) attempt(i, L.site(x + 1, y), L.bond_right, i);
        if (y + 1 < H && L.bond_down[i] == 0) attempt(i, L.site(x, y + 1), L.bond_down, i);
      }
    }
  }
  return out;
}

namespace {

struct Band {
  int off = 0;
  int len = 0;
};

std::vector<Band> split_bands(int length, int count, double q) {
  std::vector<Band> bands;
  if (count == 1) {
    bands.push_back({0, length});
    return bands;
  }
  int l_int = std::max(1, int(length / (count * q + count - 1)));
  int base = (length - (count - 1) * l_int) / count;
  if (base < 1) {
    throw OnlineError("renorm-geometry",
                      "module count " + std::to_string(count) + " does not fit in extent " +
                          std::to_string(length));
  }
  int used = base * count + (count - 1) * l_int;
  int rem = length - used;
  int off = 0;
  for (int k = 0; k < count; ++k) {
    int len = base + (k == count - 1 ? rem : 0);
    bands.push_back({off, len});
    off += len + l_int;
  }
  return bands;
}

// module grid r x c with r <= c and r * c = module_count, r maximal
std::pair<int, int> module_grid(int module_count) {
  int r = 1;
  for (int k = 1; k * k <= module_count; ++k) {
    if (module_count % k == 0) r = k;
  }
  return {r, module_count / r};
}

int strips_in(const std::vector<Band>& bands, int n) {
  int total = 0;
  for (const Band& b : bands) total += b.len / n;
  return total;
}

// strip start coordinates, one per coarse line, in carve order
std::vector<int> strip_starts(const std::vector<Band>& bands, int n, bool ascending) {
  std::vector<int> starts;
  if (ascending) {
    for (const Band& b : bands) {
      for (int i = 0; (i + 1) * n <= b.len; ++i) starts.push_back(b.off + i * n);
    }
  } else {
    for (auto it = bands.rbegin(); it != bands.rend(); ++it) {
      for (int i = 0; (i + 1) * n <= it->len; ++i) starts.push_back(it->off + it->len - (i + 1) * n);
    }
  }
  return starts;
}

// One BFS in (u, v) coordinates, u lateral / v along the travel direction.
struct StripCarver {
  const MergedLayer& layer;
  bool vertical;  // travel along +y when true, +x otherwise
  int lat_extent, trav_extent;
  std::vector<char>& mask;

  int site(int u, int v) const { return vertical ? layer.site(u, v) : layer.site(v, u); }
  bool bond(int u1, int v1, int u2, int v2) const {
    return vertical ? layer.has_bond(u1, v1, u2, v2) : layer.has_bond(v1, u1, v2, u2);
  }

  void block(const std::vector<std::pair<int, int>>& path) {
    for (auto [u, v] : path) {
      mask[site(u, v)] = 1;
      if (u > 0) mask[site(u - 1, v)] = 1;
      if (u + 1 < lat_extent) mask[site(u + 1, v)] = 1;
    }
  }

  // shortest path to row v_to inside the strip; starts either from every open
  // cell of row v_from, or from the given already-carved sites (mask-exempt);
  // rows inside an interval (outside every band) carry no coarse nodes, so
  // corridor detours there may use a widened lateral window around the strip;
  // deterministic tie-breaking via source order and fixed neighbor order
  std::vector<std::pair<int, int>> bfs(int u0, int n, int v_from, int v_to,
                                       const std::vector<std::pair<int, int>>& sources,
                                       const std::vector<Band>& trav_bands) const {
    const int span = v_to - v_from + 1;
    const int uw0 = std::max(0, u0 - n);
    const int uw1 = std::min(lat_extent, u0 + 2 * n);  // exclusive
    const int uwn = uw1 - uw0;
    auto idx = [&](int u, int v) { return (v - v_from) * uwn + (u - uw0); };
    std::vector<int> parent(std::size_t(span) * uwn, -2);
    std::deque<std::pair<int, int>> queue;
    auto in_band = [&](int v) {
      for (const Band& b : trav_bands) {
        if (v >= b.off && v < b.off + b.len) return true;
      }
      return false;
    };
    auto allowed = [&](int u, int v) {
      if (v < v_from || v > v_to) return false;
      if (in_band(v) ? (u < u0 || u >= u0 + n) : (u < uw0 || u >= uw1)) return false;
      return mask[site(u, v)] == 0;
    };
    if (sources.empty()) {
      for (int u = u0; u < u0 + n; ++u) {
        if (allowed(u, v_from)) {
          queue.push_back({u, v_from});
          parent[idx(u, v_from)] = -1;
        }
      }
    } else {
      for (auto [u, v] : sources) {
        if (u < uw0 || u >= uw1 || v < v_from || v > v_to) continue;
        queue.push_back({u, v});
        parent[idx(u, v)] = -1;
      }
    }
    const int du[4] = {0, 1, 0, -1};
    const int dv[4] = {-1, 0, 1, 0};
    while (!queue.empty()) {
      auto [u, v] = queue.front();
      queue.pop_front();
      const bool done = v == v_to;
      if (done) {
        std::vector<std::pair<int, int>> path{{u, v}};
        while (parent[idx(u, v)] >= 0) {
          int pi = parent[idx(u, v)];
          u = uw0 + pi % uwn;
          v = v_from + pi / uwn;
          path.push_back({u, v});
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (int d = 0; d < 4; ++d) {
        int nu = u + du[d], nv = v + dv[d];
        if (!allowed(nu, nv)) continue;
        if (parent[idx(nu, nv)] != -2) continue;
        if (!bond(u, v, nu, nv)) continue;
        parent[idx(nu, nv)] = idx(u, v);
        queue.push_back({nu, nv});
      }
    }
    return {};
  }

  // full path through all travel bands: the first band is entered from its
  // whole top row, each later band is reached by a corridor grown from any
  // already-carved site of the path through the interval rows
  std::vector<int> carve(int u0, int n, const std::vector<Band>& trav_bands) {
    std::vector<std::pair<int, int>> carved;
    for (std::size_t b = 0; b < trav_bands.size(); ++b) {
      const int v1 = trav_bands[b].off + trav_bands[b].len - 1;
      const int v0 = b == 0 ? trav_bands[b].off : trav_bands[b - 1].off;
      auto seg = bfs(u0, n, v0, v1, b == 0 ? std::vector<std::pair<int, int>>{} : carved,
                     trav_bands);
      if (seg.empty()) return {};
      block(seg);
      carved.insert(carved.end(), seg.begin(), seg.end());
    }
    std::vector<int> result;
    result.reserve(carved.size());
    for (auto [u, v] : carved) result.push_back(site(u, v));
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }
};

std::pair<int, int> carve_targets(int width, int height, const RenormConfig& rc) {
  auto [rows_m, cols_m] = module_grid(rc.module_count);
  auto xb = split_bands(width, cols_m, rc.mi_ratio);
  auto yb = split_bands(height, rows_m, rc.mi_ratio);
  return {strips_in(xb, rc.node_size), strips_in(yb, rc.node_size)};
}

}  // namespace

RenormalizedLattice carve_lattice(const MergedLayer& layer, const RenormConfig& rc) {
  rc.validate();
  const int W = layer.width, H = layer.height, n = rc.node_size;
  auto [rows_m, cols_m] = module_grid(rc.module_count);
  auto xbands = split_bands(W, cols_m, rc.mi_ratio);
  auto ybands = split_bands(H, rows_m, rc.mi_ratio);

  RenormalizedLattice lat;
  lat.target_cols = strips_in(xbands, n);
  lat.target_rows = strips_in(ybands, n);

  std::vector<char> vmask(std::size_t(W) * H, 0), hmask(std::size_t(W) * H, 0);
  std::vector<std::vector<int>> vpaths, hpaths;

  StripCarver vc{layer, true, W, H, vmask};
  for (int u0 : strip_starts(xbands, n, /*ascending=*/true)) {
    auto path = vc.carve(u0, n, ybands);
    if (!path.empty()) vpaths.push_back(std::move(path));
  }
  StripCarver hc{layer, false, H, W, hmask};
  for (int u0 : strip_starts(ybands, n, /*ascending=*/false)) {
    auto path = hc.carve(u0, n, xbands);
    if (!path.empty()) hpaths.push_back(std::move(path));
  }

  lat.cols = int(vpaths.size());
  lat.rows = int(hpaths.size());
  lat.rep_site.assign(std::size_t(lat.rows) * lat.cols, -1);
  for (int cy = 0; cy < lat.rows; ++cy) {
    for (int cx = 0; cx < lat.cols; ++cx) {
      const auto& v = vpaths[cx];
      const auto& h = hpaths[cy];
      std::vector<int> common;
      std::set_intersection(v.begin(), v.end(), h.begin(), h.end(), std::back_inserter(common));
      if (common.empty()) throw std::logic_error("carved strip paths do not intersect");
      lat.rep_site[std::size_t(cy) * lat.cols + cx] = common.front();
    }
  }
  lat.col_paths = std::move(vpaths);
  lat.row_paths = std::move(hpaths);
  return lat;
}

std::optional<RenormalizedLattice> renormalize_2d(const MergedLayer& layer,
                                                  const RenormConfig& rc) {
  RenormalizedLattice lat = carve_lattice(layer, rc);
  if (!lat.full()) return std::nullopt;
  return lat;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

Dsu bond_components(const MergedLayer& L) {
  Dsu dsu(L.width * L.height);
  for (int y = 0; y < L.height; ++y) {
    for (int x = 0; x < L.width; ++x) {
      const int i = L.site(x, y);
      if (x + 1 < L.width && L.bond_right[i]) dsu.unite(i, L.site(x + 1, y));
      if (y + 1 < L.height && L.bond_down[i]) dsu.unite(i, L.site(x, y + 1));
    }
  }
  return dsu;
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

struct LayerInfo {
  std::vector<std::pair<Coord, std::uint64_t>> mapped;  // coord, g_node
  int node_count = 0;
  std::vector<Coord> ancillas;
  std::vector<std::pair<Coord, Coord>> ancilla_edges;
  std::vector<TemporalEdge> demands;  // arriving here
  std::vector<TemporalEdge> departs;  // leaving here
};

}  // namespace

ExecutionReport execute(const InstructionProgram& program, const HardwareConfig& cfg,
                        const RenormConfig& rc, const ExecuteOptions& opt) {
  cfg.validate();
  rc.validate();

  int vw = 1, vh = 1;
  for (const Instruction& ins : program.instructions) {
    for (const Coord* c : {&ins.a, &ins.b}) {
      vw = std::max(vw, c->x + 1);
      vh = std::max(vh, c->y + 1);
    }
  }
  FlexLatticeIR ir = replay_program(program, VirtualHardwareConfig{vw, vh});
  if (auto violations = validate_ir(ir); !violations.empty()) {
    throw OnlineError("invalid-program", violations.front().code + ": " + violations.front().detail);
  }
  auto [target_cols, target_rows] = carve_targets(cfg.rsl_width, cfg.rsl_height, rc);
  if (target_cols < vw || target_rows < vh) {
    throw OnlineError("config", "renormalized lattice target " + std::to_string(target_cols) + "x" +
                                    std::to_string(target_rows) + " smaller than virtual " +
                                    std::to_string(vw) + "x" + std::to_string(vh));
  }

  std::vector<LayerInfo> layers(ir.layer_count);
  for (const auto& [coord, node] : ir.nodes) {
    LayerInfo& li = layers[coord.layer];
    ++li.node_count;
    if (node.kind == VNodeKind::Mapped) li.mapped.push_back({coord, node.g_node});
    else li.ancillas.push_back(coord);
  }
  for (const SpatialEdge& e : ir.spatial_edges) {
    Coord a{e.x1, e.y1, e.layer}, b{e.x2, e.y2, e.layer};
    auto ka = ir.kind_at(a), kb = ir.kind_at(b);
    if (ka != VNodeKind::Mapped && ka != VNodeKind::Unused && kb != VNodeKind::Mapped &&
        kb != VNodeKind::Unused) {
      layers[e.layer].ancilla_edges.push_back({a, b});
    }
  }
  for (const TemporalEdge& e : ir.temporal_edges) {
    layers[e.layer_to].demands.push_back(e);
    layers[e.layer_from].departs.push_back(e);
  }

  struct StoredBundle {
    int rep_site;
    long long clock;
  };
  std::map<TemporalEdge, StoredBundle> stored;

  ExecutionReport rep;
  const int m = merge_factor(cfg.resource_state_size, kRequiredDegree);
  const double p = cfg.p_eff();
  long long clock = 0;

  for (int lprog = 0; lprog < ir.layer_count; ++lprog) {
    const LayerInfo& li = layers[lprog];
    int attempts = 0;
    for (;;) {
      if (rep.rsl_consumed >= opt.rsl_cap) {
        rep.success = false;
        rep.failure_reason = "rsl-cap";
        return rep;
      }
      const long long r = rep.rsl_consumed;
      Rng rng = substream(cfg.seed, std::uint64_t(r));
      BuildResult build = build_merged_layer(cfg, rng);
      ++rep.rsl_consumed;
      ++attempts;
      rep.fusions_attempted += build.fusions;
      clock += m;
      for (const auto& [edge, bundle] : stored) {
        const long long held = clock - bundle.clock;
        if (held > cfg.photon_lifetime_cycles) {
          throw OnlineError("delay-budget",
                            "stored bundle at (" + std::to_string(edge.x) + ", " +
                                std::to_string(edge.y) + ") held " + std::to_string(held) +
                                " cycles, lifetime " + std::to_string(cfg.photon_lifetime_cycles));
        }
      }

      RenormalizedLattice lat = carve_lattice(build.layer, rc);
      {
        std::ostringstream os;
        os << "rsl=" << r << " layer=" << lprog << " build fusions=" << build.fusions
           << " lattice=" << lat.cols << "x" << lat.rows;
        rep.event_log.push_back(os.str());
      }

      bool ok = lat.full();
      std::uint64_t bundle_fusions = 0;
      if (ok && !li.demands.empty()) {
        Dsu comps = bond_components(build.layer);
        for (const TemporalEdge& d : li.demands) {
          const StoredBundle& sb = stored.at(d);
          const int new_rep = lat.rep(d.x, d.y);
          const int sx = sb.rep_site % cfg.rsl_width;
          const int sy = sb.rep_site / cfg.rsl_width;
          bool connected = false;
          const int dx[kBundleSize] = {0, 0, 1, 0, -1};
          const int dy[kBundleSize] = {0, -1, 0, 1, 0};
          for (int k = 0; k < kBundleSize; ++k) {
            const int bx = sx + dx[k], by = sy + dy[k];
            if (bx < 0 || bx >= cfg.rsl_width || by < 0 || by >= cfg.rsl_height) continue;
            ++bundle_fusions;
            const bool fused = rng_bernoulli(rng, p);
            const int landing = build.layer.site(bx, by);
            if (fused && comps.find(landing) == comps.find(new_rep)) connected = true;
          }
          if (!connected) ok = false;
        }
      }

      if (ok) {
        rep.fusions_attempted += bundle_fusions;
        rep.logical_layer_indices.push_back(r);
        rep.attempts_per_layer.push_back(attempts);
        for (const TemporalEdge& d : li.demands) {
          const long long held = clock - stored.at(d).clock;
          rep.delay_peak_cycles = std::max(rep.delay_peak_cycles, held);
          stored.erase(d);
        }
        for (const TemporalEdge& d : li.departs) {
          stored[d] = StoredBundle{lat.rep(d.x, d.y), clock};
        }

        LayerAssignment asg;
        if (opt.pattern) {
          for (const auto& [coord, g_node] : li.mapped) {
            auto it = opt.pattern->node_basis.find(NodeId(g_node));
            if (it == opt.pattern->node_basis.end()) continue;  // output: left unmeasured
            const ByproductWord& word = build.layer.repairs[lat.rep(coord.x, coord.y)];
            asg.mapped.emplace(g_node, propagate_through_measurement(word, it->second).first);
          }
        }
        {
          std::map<Coord, int> index;
          for (const Coord& c : li.ancillas) index.emplace(c, int(index.size()));
          Dsu wires(int(index.size()));
          for (const auto& [a, b] : li.ancilla_edges) wires.unite(index.at(a), index.at(b));
          std::map<int, int> sizes;
          for (const auto& [c, i] : index) ++sizes[wires.find(i)];
          for (const auto& [root, size] : sizes) {
            (size % 2 == 0 ? asg.wire_x_nodes : asg.wire_y_nodes) += size;
          }
        }
        asg.z_measured = vw * vh - li.node_count;
        rep.assignments.push_back(std::move(asg));

        std::ostringstream os;
        os << "rsl=" << r << " layer=" << lprog << " logical fusions=" << bundle_fusions;
        rep.event_log.push_back(os.str());
        break;
      }

      // failed layer: fuse the whole RSL forward and try the next one
      const std::uint64_t forward = std::uint64_t(cfg.rsl_width) * cfg.rsl_height;
      rep.fusions_attempted += bundle_fusions + forward;
      ++rep.routing_layer_count;
      std::ostringstream os;
      os << "rsl=" << r << " layer=" << lprog << " routing fusions=" << (bundle_fusions + forward);
      rep.event_log.push_back(os.str());
    }
  }
  rep.success = true;
  return rep;
}

BaselineModel baseline_model_from_ir(const FlexLatticeIR& ir) {
  BaselineModel model;
  model.layers.resize(ir.layer_count);
  for (const auto& [coord, node] : ir.nodes) ++model.layers[coord.layer].intra;
  for (const SpatialEdge& e : ir.spatial_edges) ++model.layers[e.layer].intra;
  for (const TemporalEdge& e : ir.temporal_edges) ++model.layers[e.layer_to].inter;
  return model;
}

ExecutionReport baseline_retry_execute(const BaselineModel& model, const HardwareConfig& cfg,
                                       long long rsl_cap) {
  cfg.validate();
  const double p = cfg.p_eff();
  ExecutionReport rep;
  std::size_t li = 0;
  while (li < model.layers.size()) {
    if (rep.rsl_consumed >= rsl_cap) {
      rep.success = false;
      rep.failure_reason = "rsl-cap";
      return rep;
    }
    const long long r = rep.rsl_consumed;
    Rng rng = substream(cfg.seed, std::uint64_t(r));
    ++rep.rsl_consumed;
    const BaselineModel::Layer& lay = model.layers[li];
    std::uint64_t f = 0;
    bool intra_ok = true;
    for (int i = 0; i < lay.intra; ++i) {
      ++f;
      if (!rng_bernoulli(rng, p)) intra_ok = false;
    }
    std::string verdict;
    if (!intra_ok) {
      verdict = "retry";  // rebuild this layer on the next resource state
    } else {
      bool inter_ok = true;
      for (int i = 0; i < lay.inter; ++i) {
        ++f;
        if (!rng_bernoulli(rng, p)) inter_ok = false;
      }
      if (inter_ok) {
        verdict = "advance";
        rep.logical_layer_indices.push_back(r);
        ++li;
      } else {
        verdict = "restart";  // an inter-layer fusion failed: start over
        li = 0;
      }
    }
    rep.fusions_attempted += f;
    std::ostringstream os;
    os << "rsl=" << r << " layer=" << li << " " << verdict << " fusions=" << f;
    rep.event_log.push_back(os.str());
  }
  rep.success = true;
  return rep;
}

std::uint64_t recount_fusions(const std::vector<std::string>& event_log) {
  std::uint64_t total = 0;
  for (const std::string& line : event_log) {
    std::size_t pos = 0;
    while ((pos = line.find("fusions=", pos)) != std::string::npos) {
      pos += 8;
      std::uint64_t value = 0;
      while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') {
        value = value * 10 + std::uint64_t(line[pos] - '0');
        ++pos;
      }
      total += value;
    }
  }
  return total;
}

}  // namespace oneperc
