#pragma once

// Test-only brute-force executor for measurement patterns: enumerates every
// outcome branch, applies the wire feed-forward corrections, and compares the
// surviving output state against the circuit unitary acting on |0...0>.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "oneperc/frontend.hpp"
#include "oneperc/oracle.hpp"
#include "support/densesim.hpp"

namespace patternsim {

using oneperc::Circuit;
using oneperc::Gate;
using oneperc::MeasurementPattern;
using oneperc::NodeId;

inline densesim::Mat2 j_matrix(double alpha) {
  double r = 1.0 / std::sqrt(2.0);
  densesim::cplx e = std::exp(densesim::cplx(0, alpha));
  return {{{r, r * e}, {r, -r * e}}};
}

// Circuit applied to |0...0>, qubit w = dense qubit w.
inline densesim::Vec circuit_state(const Circuit& c) {
  densesim::Vec v = densesim::zero_state(c.qubit_count);
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::J) {
      densesim::apply_1q(v, c.qubit_count, g.wire_a, j_matrix(g.angle));
    } else {
      densesim::apply_cz(v, c.qubit_count, g.wire_a, g.wire_b);
    }
  }
  return v;
}

struct BranchStats {
  int branches = 0;       // nonzero-probability branches
  double total_prob = 0;  // must sum to ~1
  bool all_match = true;
};

// Runs every outcome branch of the pattern (inputs initialized to |0>) and
// checks each against `expected` (a state over the pattern's wires).
inline BranchStats check_pattern(const MeasurementPattern& p, const densesim::Vec& expected) {
  namespace ds = densesim;
  auto idx = oneperc::oracle::qubit_indices(p.graph);
  int n = static_cast<int>(p.graph.node_count());

  // wire successor of each measured node
  std::map<NodeId, NodeId> next_on_wire;
  for (const auto& chain : p.wires) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) next_on_wire[chain[i]] = chain[i + 1];
  }

  std::set<NodeId> input_set(p.inputs.begin(), p.inputs.end());
  ds::Vec init(std::size_t{1} << n, 1.0);
  for (std::size_t i = 0; i < init.size(); ++i) {
    for (NodeId v : p.graph.nodes()) {
      bool bit = (i >> (n - 1 - idx.at(v))) & 1u;
      if (input_set.count(v)) {
        if (bit) init[i] = 0;  // inputs |0>
      } else {
        init[i] *= 1.0 / std::sqrt(2.0);  // everything else |+>
      }
    }
  }
  for (auto [u, w] : p.graph.edges()) ds::apply_cz(init, n, idx.at(u), idx.at(w));

  std::vector<NodeId> order;
  for (NodeId v : oneperc::dependency_dag(p).topological_order()) {
    if (p.node_basis.count(v)) order.push_back(v);
  }

  // expected state reindexed from wire order to ascending-node-id order
  std::vector<NodeId> outs_sorted = p.outputs;
  std::sort(outs_sorted.begin(), outs_sorted.end());
  int nw = static_cast<int>(p.outputs.size());
  std::vector<int> wire_of(nw);
  for (int k = 0; k < nw; ++k) {
    for (int w = 0; w < nw; ++w) {
      if (p.outputs[w] == outs_sorted[k]) wire_of[k] = w;
    }
  }
  ds::Vec expect_perm(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::size_t src = 0;
    for (int k = 0; k < nw; ++k) {
      if ((i >> (nw - 1 - k)) & 1u) src |= std::size_t{1} << (nw - 1 - wire_of[k]);
    }
    expect_perm[i] = expected[src];
  }

  BranchStats stats;
  std::map<NodeId, int> sx0, sz0;
  for (NodeId v : p.graph.nodes()) sx0[v] = sz0[v] = 0;

  struct Frame {
    ds::Vec state;
    std::map<NodeId, int> sx, sz;
    std::size_t step;
    double prob;
  };
  std::vector<Frame> stack{{init, sx0, sz0, 0, 1.0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.step == order.size()) {
      ds::Vec v = f.state;
      for (NodeId o : p.outputs) {
        if (f.sz.at(o)) ds::apply_1q(v, n, idx.at(o), ds::pauli_z());
        if (f.sx.at(o)) ds::apply_1q(v, n, idx.at(o), ds::pauli_x());
      }
      std::vector<int> drop;
      for (NodeId m : order) drop.push_back(idx.at(m));
      ds::Vec rest = ds::remove_qubits(v, n, drop);
      stats.branches += 1;
      stats.total_prob += f.prob;
      stats.all_match = stats.all_match && ds::same_up_to_phase(rest, expect_perm);
      continue;
    }
    NodeId m = order[f.step];
    double theta = p.node_basis.at(m).angle();
    double adapted = (f.sx.at(m) ? -theta : theta) + (f.sz.at(m) ? std::numbers::pi : 0.0);
    ds::Mat2 obs = ds::add(ds::scale(std::cos(adapted), ds::pauli_x()),
                           ds::scale(std::sin(adapted), ds::pauli_y()));
    for (int s = 0; s < 2; ++s) {
      ds::Vec v = f.state;
      double pr = ds::project_product(v, n, {{idx.at(m), obs}}, s);
      if (pr < 1e-12) continue;
      Frame g{std::move(v), f.sx, f.sz, f.step + 1, f.prob * pr};
      if (s == 1) {
        NodeId succ = next_on_wire.at(m);
        g.sx[succ] ^= 1;
        for (NodeId k : p.graph.neighbors(succ)) {
          if (k != m) g.sz[k] ^= 1;
        }
      }
      stack.push_back(std::move(g));
    }
  }
  return stats;
}

inline BranchStats check_circuit_pattern(const Circuit& c) {
  return check_pattern(oneperc::translate_circuit(c), circuit_state(c));
}

}  // namespace patternsim
