#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oneperc/frontend.hpp"
#include "oneperc/ir.hpp"

namespace oneperc {

struct MapperConfig {
  VirtualHardwareConfig vh;
  double occupancy_cap = 0.25;                     // fraction of sites per layer
  std::optional<int> refresh_interval_layers = 50; // nullopt = never refresh
  int routing_budget = -1;                         // ancillas per wire; <0 = width+height

  void validate() const;  // throws std::invalid_argument
  int budget() const { return routing_budget < 0 ? vh.width + vh.height : routing_budget; }
};

// Structured place-and-route failure: `code` is one of "unroutable-edge",
// "occupancy-deadlock", "layer-full"; `detail` names the edge or layer.
class MapperError : public std::runtime_error {
 public:
  MapperError(std::string code, std::string detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Offline pass: greedy DAG-front scheduling onto consecutive 2D layers.
// Every pattern node becomes one mapped v_node; incomplete nodes are carried
// forward as temporal chains of ancilla instances (adjacent hops or
// store/retrieve cross-layer hops); every pattern edge is realized as a
// spatial wire path on the layer of its later endpoint.
FlexLatticeIR map_program(const MeasurementPattern& p, const MapperConfig& cfg);

struct IrMetrics {
  int logical_layers = 0;
  std::size_t spatial_edges = 0;
  std::size_t temporal_edges = 0;
  std::vector<int> stored_node_layer_spans;  // layer gap of each memory-backed edge

  bool operator==(const IrMetrics&) const = default;
};

IrMetrics ir_metrics(const FlexLatticeIR& ir);

// Independent semantic check: merge each temporal chain into its mapped node,
// contract degree-2 ancilla wire paths into single edges, and return the
// resulting program edge set over g_node ids. Throws std::logic_error if the
// IR does not contract cleanly (chain joining two mapped nodes, wire ancilla
// of degree != 2, or a self edge).
std::set<std::pair<std::uint64_t, std::uint64_t>> contract_ir(const FlexLatticeIR& ir);

}  // namespace oneperc
