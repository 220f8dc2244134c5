#include "oneperc/frontend.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oneperc/rng.hpp"

namespace oneperc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (kTwoPi - a < 1e-12) a = 0.0;
  return a;
}

}  // namespace

Gate Gate::j(int wire, double angle) {
  return Gate{Kind::J, wire, wire, wrap_angle(angle)};
}

Gate Gate::cz(int a, int b) { return Gate{Kind::CZ, a, b, 0.0}; }

void Circuit::validate() const {
  if (qubit_count < 1) throw std::invalid_argument("circuit needs at least one qubit");
  for (const Gate& g : gates) {
    auto in_range = [&](int w) { return w >= 0 && w < qubit_count; };
    if (!in_range(g.wire_a) || !in_range(g.wire_b)) {
      throw std::invalid_argument("gate wire out of range");
    }
    if (g.kind == Gate::Kind::CZ && g.wire_a == g.wire_b) {
      throw std::invalid_argument("CZ needs two distinct wires");
    }
    if (g.angle < 0 || g.angle >= kTwoPi) {
      throw std::invalid_argument("gate angle outside [0, 2*pi)");
    }
  }
}

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.qubit_count << "\n";
  os.precision(17);
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::J) {
      os << "J " << g.wire_a << " " << g.angle << "\n";
    } else {
      os << "CZ " << g.wire_a << " " << g.wire_b << "\n";
    }
  }
  return os.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Circuit c;
  int line_no = 0;
  bool have_header = false;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    if (!have_header) {
      if (op != "qubits") fail("expected `qubits <n>` header");
      if (!(ls >> c.qubit_count)) fail("bad qubit count");
      have_header = true;
    } else if (op == "J") {
      int w;
      double a;
      if (!(ls >> w >> a)) fail("expected `J <wire> <angle>`");
      c.gates.push_back(Gate::j(w, a));
    } else if (op == "CZ") {
      int a, b;
      if (!(ls >> a >> b)) fail("expected `CZ <a> <b>`");
      c.gates.push_back(Gate::cz(a, b));
    } else {
      fail("unknown gate " + op);
    }
  }
  if (!have_header) throw std::invalid_argument("missing `qubits` header");
  c.validate();
  return c;
}

void MeasurementPattern::validate() const {
  std::set<NodeId> outs(outputs.begin(), outputs.end());
  for (NodeId v : graph.nodes()) {
    bool has_basis = node_basis.count(v) != 0;
    if (outs.count(v) ? has_basis : !has_basis) {
      throw std::logic_error("pattern basis assignment inconsistent with outputs");
    }
  }
}

MeasurementPattern translate_circuit(const Circuit& c) {
  c.validate();
  MeasurementPattern p;
  std::vector<NodeId> frontier;
  for (int w = 0; w < c.qubit_count; ++w) {
    NodeId v = p.graph.add_node(NodeRole::Program);
    frontier.push_back(v);
    p.inputs.push_back(v);
    p.wires.push_back({v});
  }
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::J) {
      NodeId prev = frontier[g.wire_a];
      NodeId next = p.graph.add_node(NodeRole::Program);
      p.graph.add_edge(prev, next);
      // J(alpha) = H P(alpha) teleports through the chain as the equatorial
      // measurement at -alpha (the angle sign flips under the projection)
      MeasurementBasis mb = MeasurementBasis::equatorial(-g.angle);
      p.node_basis.emplace(prev, mb);
      p.graph.set_basis(prev, mb);
      frontier[g.wire_a] = next;
      p.wires[g.wire_a].push_back(next);
    } else {
      // toggle, not insert: a repeated CZ on untouched frontiers cancels
      p.graph.toggle_edge(frontier[g.wire_a], frontier[g.wire_b]);
    }
  }
  p.outputs = frontier;
  p.validate();
  return p;
}

std::vector<NodeId> DependencyDag::front_layer(const std::set<NodeId>& done) const {
  std::vector<NodeId> out;
  for (NodeId v : nodes) {
    if (done.count(v)) continue;
    bool ready = true;
    auto it = preds.find(v);
    if (it != preds.end()) {
      for (NodeId u : it->second) ready = ready && done.count(u);
    }
    if (ready) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> DependencyDag::topological_order() const {
  std::set<NodeId> done;
  std::vector<NodeId> order;
  while (done.size() < nodes.size()) {
    std::vector<NodeId> front = front_layer(done);
    if (front.empty()) throw std::logic_error("dependency dag has a cycle");
    for (NodeId v : front) {
      order.push_back(v);
      done.insert(v);
    }
  }
  return order;
}

DependencyDag dependency_dag(const MeasurementPattern& p) {
  DependencyDag dag;
  dag.nodes = p.graph.nodes();
  for (const auto& chain : p.wires) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      dag.succs[chain[i]].insert(chain[i + 1]);
      dag.preds[chain[i + 1]].insert(chain[i]);
    }
  }
  return dag;
}

namespace {

// Gate-emission helpers over the exact identities H = J(0),
// P(theta) = J(0)J(theta), CX(c,t) = H_t CZ H_t.
struct Builder {
  Circuit c;

  void j(int w, double a) { c.gates.push_back(Gate::j(w, a)); }
  void cz(int a, int b) { c.gates.push_back(Gate::cz(a, b)); }
  void h(int w) { j(w, 0); }
  void p(int w, double theta) {  // diag(1, e^{i theta})
    j(w, theta);
    j(w, 0);
  }
  void rx(int w, double theta) {  // H P(theta) H
    j(w, 0);
    j(w, theta);
  }
  void cx(int ctl, int tgt) {
    h(tgt);
    cz(ctl, tgt);
    h(tgt);
  }
  void cp(int a, int b, double theta) {  // diag(1,1,1,e^{i theta}), exact
    p(a, theta / 2);
    p(b, theta / 2);
    cx(a, b);
    p(b, -theta / 2);
    cx(a, b);
  }
  void swap(int a, int b) {
    cx(a, b);
    cx(b, a);
    cx(a, b);
  }
  // cascade of H + controlled phases, no final swaps; qubit lo is the
  // register's most significant bit
  void qft_noswap(int lo, int m) {
    for (int i = 0; i < m; ++i) {
      h(lo + i);
      for (int k = i + 1; k < m; ++k) {
        cp(lo + k, lo + i, std::numbers::pi / double(1 << (k - i)));
      }
    }
  }
  void qft_noswap_inverse(int lo, int m) {
    for (int i = m - 1; i >= 0; --i) {
      for (int k = m - 1; k > i; --k) {
        cp(lo + k, lo + i, -std::numbers::pi / double(1 << (k - i)));
      }
      h(lo + i);
    }
  }
};

Circuit build_qaoa(int n, Rng& rng) {
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  rng_shuffle(rng, all);
  std::size_t k = all.size() / 2;
  double gamma = rng_uniform(rng) * kTwoPi;
  double beta = rng_uniform(rng) * kTwoPi;

  Builder b;
  b.c.qubit_count = n;
  for (int w = 0; w < n; ++w) b.h(w);
  for (std::size_t e = 0; e < k; ++e) {
    auto [u, v] = all[e];
    // e^{-i gamma Z_u Z_v} up to phase
    b.cx(u, v);
    b.p(v, 2 * gamma);
    b.cx(u, v);
  }
  for (int w = 0; w < n; ++w) b.rx(w, 2 * beta);
  return b.c;
}

Circuit build_qft(int n) {
  Builder b;
  b.c.qubit_count = n;
  b.qft_noswap(0, n);
  for (int i = 0; i < n / 2; ++i) b.swap(i, n - 1 - i);
  return b.c;
}

// In-place adder: registers a = wires [0, ma), b = wires [ma, n); computes
// b += a mod 2^(n-ma) via phase accumulation in the transformed basis.
Circuit build_rca(int n) {
  int ma = n / 2, mb = n - ma, lo = ma;
  Builder b;
  b.c.qubit_count = n;
  b.qft_noswap(lo, mb);
  for (int i = 0; i < ma; ++i) {
    for (int j = 0; j < mb; ++j) {
      int denom = mb + 1 + i - ma - j;  // theta = 2*pi / 2^denom
      if (denom <= 0) continue;        // whole turns contribute nothing
      b.cp(i, lo + j, kTwoPi / double(1ull << denom));
    }
  }
  b.qft_noswap_inverse(lo, mb);
  return b.c;
}

Circuit build_vqe(int n, Rng& rng) {
  Builder b;
  b.c.qubit_count = n;
  auto rotation_layer = [&] {
    for (int w = 0; w < n; ++w) {
      b.rx(w, rng_uniform(rng) * kTwoPi);
      b.p(w, rng_uniform(rng) * kTwoPi);
    }
  };
  rotation_layer();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) b.cz(i, j);
  rotation_layer();
  return b.c;
}

}  // namespace

Circuit build_benchmark(const std::string& name, int n_qubits, std::uint64_t seed) {
  if (n_qubits < 2) throw std::invalid_argument("benchmarks need n >= 2");
  Rng rng(seed);
  Circuit c;
  if (name == "qaoa") {
    c = build_qaoa(n_qubits, rng);
  } else if (name == "qft") {
    c = build_qft(n_qubits);
  } else if (name == "rca") {
    c = build_rca(n_qubits);
  } else if (name == "vqe") {
    c = build_vqe(n_qubits, rng);
  } else {
    throw std::invalid_argument("unsupported benchmark: " + name);
  }
  c.validate();
  return c;
}

}  // namespace oneperc
