#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oneperc/basis.hpp"
#include "oneperc/frontend.hpp"
#include "oneperc/ir.hpp"
#include "oneperc/rng.hpp"

namespace oneperc {

// Photonic hardware model: one resource-state layer (RSL) per cycle, each
// site holding a star of `resource_state_size` qubits.
struct HardwareConfig {
  int rsl_width = 48;
  int rsl_height = 48;
  int resource_state_size = 7;
  double p_fusion = 0.75;
  double p_loss = 0.0;  // folds into p_eff: both fusion photons must survive
  int retry_batches = 1;
  int photon_lifetime_cycles = 5000;
  std::uint64_t seed = 0;

  double p_eff() const { return p_fusion * (1.0 - p_loss) * (1.0 - p_loss); }
  void validate() const;  // throws std::invalid_argument
};

// In-plane degree 4 plus one temporal link up and one down.
inline constexpr int kRequiredDegree = 6;
// Qubits fused per time-like connection: a node's site plus its 4-neighborhood.
inline constexpr int kBundleSize = 5;

// Smallest number of stars merged root-leaf so that the cluster's free degree
// (s-1) + (m-1)(s-2) reaches `required_degree`.
int merge_factor(int resource_state_size, int required_degree);

// Site-level view of one merged RSL: every site is a merged cluster, in-plane
// bonds are the leaf-leaf fusion outcomes.
struct MergedLayer {
  int width = 0, height = 0;
  std::vector<char> bond_right;  // site (x,y)-(x+1,y)
  std::vector<char> bond_down;   // site (x,y)-(x,y+1)
  std::vector<int> spare_degree; // leaves left per site after all attempts
  std::vector<ByproductWord> repairs;  // per-site byproducts of failed merges

  int site(int x, int y) const { return y * width + x; }
  bool has_bond(int x1, int y1, int x2, int y2) const;
};

struct BuildResult {
  MergedLayer layer;
  std::uint64_t fusions = 0;
};

BuildResult build_merged_layer(const HardwareConfig& cfg, Rng& rng);

struct RenormConfig {
  int node_size = 8;      // coarse cell is node_size x node_size sites
  int module_count = 1;   // modules renormalized independently
  double mi_ratio = 7.0;  // module length / interval length

  void validate() const;  // throws std::invalid_argument
};

struct RenormalizedLattice {
  int cols = 0, rows = 0;               // achieved coarse size
  int target_cols = 0, target_rows = 0; // full strip count for the geometry
  std::vector<int> rep_site;            // rows*cols representative sites
  std::vector<std::vector<int>> col_paths;  // carved sites per coarse column
  std::vector<std::vector<int>> row_paths;  // carved sites per coarse row

  int rep(int cx, int cy) const { return rep_site[std::size_t(cy) * cols + cx]; }
  bool full() const { return cols == target_cols && rows == target_rows; }
};

// Carves vertical strip paths left-to-right and horizontal strip paths
// bottom-to-top (BFS shortest path per strip, removing each found path and
// its lateral neighbors); modules are stitched through interval corridors,
// a coarse row/column surviving only if all its segments and corridors exist.
RenormalizedLattice carve_lattice(const MergedLayer& layer, const RenormConfig& rc);

// Same carve, but a value only when the full target size was reached.
std::optional<RenormalizedLattice> renormalize_2d(const MergedLayer& layer,
                                                  const RenormConfig& rc);

class OnlineError : public std::runtime_error {
 public:
  OnlineError(std::string code, std::string detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Measurement assignment for one realized program layer.
struct LayerAssignment {
  std::map<std::uint64_t, MeasurementBasis> mapped;  // byproduct-adjusted bases
  int wire_x_nodes = 0;  // ancillas on even-length wires
  int wire_y_nodes = 0;  // ancillas on odd-length wires
  int z_measured = 0;    // untouched virtual cells
};

struct ExecutionReport {
  bool success = false;
  std::string failure_reason;
  long long rsl_consumed = 0;
  std::uint64_t fusions_attempted = 0;
  std::vector<long long> logical_layer_indices;  // RSL index of each logical layer
  long long routing_layer_count = 0;
  long long delay_peak_cycles = 0;
  std::vector<int> attempts_per_layer;  // RSLs consumed per logical layer
  std::vector<LayerAssignment> assignments;
  std::vector<std::string> event_log;
};

struct ExecuteOptions {
  long long rsl_cap = 1'000'000;
  const MeasurementPattern* pattern = nullptr;  // enables mapped-basis reporting
};

// Online pass: consume RSLs until every program layer is realized, demanding
// a full renormalized lattice plus all time-like connections per layer;
// failures become routing layers forwarded wholesale to the next RSL.
// Throws OnlineError("delay-budget", ...) when a stored bundle outlives the
// photon lifetime.
ExecutionReport execute(const InstructionProgram& program, const HardwareConfig& cfg,
                        const RenormConfig& rc, const ExecuteOptions& opt = {});

// All-fusions-must-succeed layer model for the repeat-until-success baseline.
struct BaselineModel {
  struct Layer {
    int intra = 0;  // fusions inside the layer's cluster
    int inter = 0;  // fusions connecting to the previous layer
  };
  std::vector<Layer> layers;
};

BaselineModel baseline_model_from_ir(const FlexLatticeIR& ir);

// Per-layer repeat-until-success on intra fusions; any failed inter-layer
// fusion restarts the whole run. Capped at `rsl_cap` consumed RSLs.
ExecutionReport baseline_retry_execute(const BaselineModel& model, const HardwareConfig& cfg,
                                       long long rsl_cap = 1'000'000);

// Independent recount: sums every "fusions=<n>" field in an event log.
std::uint64_t recount_fusions(const std::vector<std::string>& event_log);

}  // namespace oneperc
