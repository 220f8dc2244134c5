#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oneperc/graphstate.hpp"

namespace oneperc {

// Gates in the universal set {J(alpha), CZ}, J(alpha) = H * P(alpha).
struct Gate {
  enum class Kind { J, CZ } kind;
  int wire_a = 0;
  int wire_b = 0;      // CZ only
  double angle = 0.0;  // J only, in [0, 2*pi)

  static Gate j(int wire, double angle);
  static Gate cz(int a, int b);
  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int qubit_count = 0;
  std::vector<Gate> gates;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const Circuit&) const = default;
};

// One gate per line: `J <wire> <angle>` / `CZ <a> <b>`, header `qubits <n>`.
std::string serialize_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

// Measurement pattern from the chain construction: each J appends a node on
// its wire, each CZ joins the two wire frontiers.
struct MeasurementPattern {
  GraphState graph;
  std::map<NodeId, MeasurementBasis> node_basis;  // non-output nodes only
  std::vector<NodeId> inputs;                     // per wire
  std::vector<NodeId> outputs;                    // per wire
  std::vector<std::vector<NodeId>> wires;         // full chain per wire

  void validate() const;
};

MeasurementPattern translate_circuit(const Circuit& c);

// Must-measure-before constraints: wire order only (CZ edges impose none).
struct DependencyDag {
  std::set<NodeId> nodes;
  std::map<NodeId, std::set<NodeId>> preds;
  std::map<NodeId, std::set<NodeId>> succs;

  // Nodes whose predecessors are all in `done`, excluding `done` itself.
  std::vector<NodeId> front_layer(const std::set<NodeId>& done) const;
  std::vector<NodeId> topological_order() const;
};

DependencyDag dependency_dag(const MeasurementPattern& p);

// Deterministic benchmark circuits, decomposed into {J, CZ}.
// qaoa: depth-1 maxcut on a random graph with half of all possible edges.
// qft: standard transform with controlled-phase cascade and final swaps.
// rca: in-place adder a+b mod 2^(n/2) on two n/2-bit registers.
// vqe: rotation layer, all-pairs CZ entangler, rotation layer.
Circuit build_benchmark(const std::string& name, int n_qubits, std::uint64_t seed);

}  // namespace oneperc
