#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "oneperc/graphstate.hpp"

namespace oneperc::oracle {

// Signed Pauli product on up to 32 qubits: value = i^phase * prod_q X^x Z^z.
// Hermitian products have phase - popcount(x & z) even; sign is then
// i^(phase - popcount(x & z)) = +-1.
struct PauliProduct {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  std::uint8_t phase = 0;  // exponent of i, mod 4

  static PauliProduct identity() { return {}; }
  static PauliProduct single(int qubit, Pauli p, int sign = +1);

  PauliProduct& mul(const PauliProduct& other);
  bool commutes_with(const PauliProduct& other) const;
  int sign() const;  // +1 or -1, requires a Hermitian product
  bool operator==(const PauliProduct&) const = default;
};

struct MeasureResult {
  int outcome = 0;
  bool deterministic = false;
};

// Desk-scale stabilizer tableau (<= 12 qubits), used only as a ground-truth
// oracle for the graph rewrite rules and the measurement-identity tests.
class Tableau {
 public:
  explicit Tableau(int n);

  int qubit_count() const { return n_; }

  // Measures a signed Pauli product. Random outcomes must be either forced or
  // drawn from the supplied engine; forcing an outcome that contradicts a
  // deterministic measurement throws.
  MeasureResult measure(const PauliProduct& p, std::optional<int> forced = std::nullopt,
                        std::mt19937_64* rng = nullptr);

  // Applies the byproduct word's unitary to qubit q (first generator first).
  void apply_local_clifford(const ByproductWord& w, int q);

  // True iff the signed stabilizer groups coincide.
  bool states_equal(const Tableau& other) const;

  const std::vector<PauliProduct>& stabilizers() const { return stab_; }

 private:
  Tableau(int n, std::vector<PauliProduct> stab, std::vector<PauliProduct> destab);
  std::vector<PauliProduct> canonical_stabilizers() const;

  friend Tableau tableau_from_graph(const GraphState& g);

  int n_;
  std::vector<PauliProduct> stab_;
  std::vector<PauliProduct> destab_;
};

// Stabilizers X_i prod_{j in N(i)} Z_j, all signs +. Qubits are the graph's
// node ids in ascending order.
Tableau tableau_from_graph(const GraphState& g);

// Node id -> qubit index mapping used by tableau_from_graph.
std::map<NodeId, int> qubit_indices(const GraphState& g);

}  // namespace oneperc::oracle
