#include "oneperc/oracle.hpp"

#include <bit>
#include <stdexcept>

namespace oneperc::oracle {

PauliProduct PauliProduct::single(int qubit, Pauli p, int sign) {
  PauliProduct out;
  std::uint32_t bit = 1u << qubit;
  switch (p) {
    case Pauli::X: out.x = bit; break;
    case Pauli::Z: out.z = bit; break;
    case Pauli::Y: out.x = bit; out.z = bit; out.phase = 1; break;  // Y = i XZ
  }
  if (sign < 0) out.phase = static_cast<std::uint8_t>((out.phase + 2) % 4);
  return out;
}

PauliProduct& PauliProduct::mul(const PauliProduct& other) {
  // X^a Z^b * X^c Z^d picks up (-1)^(b.c) moving Z past X
  phase = static_cast<std::uint8_t>(
      (phase + other.phase + 2 * std::popcount(z & other.x)) % 4);
  x ^= other.x;
  z ^= other.z;
  return *this;
}

bool PauliProduct::commutes_with(const PauliProduct& other) const {
  return (std::popcount(x & other.z) + std::popcount(z & other.x)) % 2 == 0;
}

int PauliProduct::sign() const {
  int s = (phase - std::popcount(x & z)) & 3;
  if (s == 0) return +1;
  if (s == 2) return -1;
  throw std::logic_error("non-Hermitian Pauli product has no sign");
}

Tableau::Tableau(int n, std::vector<PauliProduct> stab, std::vector<PauliProduct> destab)
    : n_(n), stab_(std::move(stab)), destab_(std::move(destab)) {}

Tableau::Tableau(int n) : n_(n) {
  if (n < 1 || n > 12) throw std::invalid_argument("oracle tableau supports 1..12 qubits");
  stab_.reserve(n);
  destab_.reserve(n);
  for (int q = 0; q < n; ++q) {
    stab_.push_back(PauliProduct::single(q, Pauli::Z));
    destab_.push_back(PauliProduct::single(q, Pauli::X));
  }
}

MeasureResult Tableau::measure(const PauliProduct& p, std::optional<int> forced,
                               std::mt19937_64* rng) {
  int pivot = -1;
  for (int i = 0; i < n_; ++i) {
    if (!stab_[i].commutes_with(p)) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) {
    // deterministic: +-p lies in the group; recover the combination through
    // the destabilizers, whose partners index the needed stabilizer rows
    PauliProduct acc = PauliProduct::identity();
    for (int i = 0; i < n_; ++i) {
      if (!destab_[i].commutes_with(p)) acc.mul(stab_[i]);
    }
    if (acc.x != p.x || acc.z != p.z) {
      throw std::logic_error("deterministic measurement reconstruction failed");
    }
    int outcome = (acc.phase == p.phase) ? 0 : 1;
    if (forced && *forced != outcome) {
      throw std::invalid_argument("forced outcome contradicts a deterministic measurement");
    }
    return {outcome, true};
  }

  int outcome;
  if (forced) {
    outcome = *forced;
  } else if (rng) {
    outcome = static_cast<int>((*rng)() & 1u);
  } else {
    throw std::logic_error("random measurement outcome needs a forced bit or an engine");
  }
  for (int i = 0; i < n_; ++i) {
    if (i != pivot && !stab_[i].commutes_with(p)) stab_[i].mul(stab_[pivot]);
    if (!destab_[i].commutes_with(p)) {
      if (i == pivot) continue;
      destab_[i].mul(stab_[pivot]);
    }
  }
  destab_[pivot] = stab_[pivot];
  PauliProduct meas = p;
  if (outcome == 1) meas.phase = static_cast<std::uint8_t>((meas.phase + 2) % 4);
  stab_[pivot] = meas;
  return {outcome, false};
}

void Tableau::apply_local_clifford(const ByproductWord& w, int q) {
  if (q < 0 || q >= n_) throw std::invalid_argument("qubit out of range");
  // images of X and Z under U P U^dag, per generator (fixed 2x2 table)
  auto images = [&](ByproductGen g) -> std::pair<PauliProduct, PauliProduct> {
    switch (g) {
      case ByproductGen::Zp:  // X -> -Y, Z -> Z
        return {PauliProduct::single(q, Pauli::Y, -1), PauliProduct::single(q, Pauli::Z)};
      case ByproductGen::Zm:  // X -> Y
        return {PauliProduct::single(q, Pauli::Y, +1), PauliProduct::single(q, Pauli::Z)};
      case ByproductGen::Xp:  // Z -> Y
        return {PauliProduct::single(q, Pauli::X, +1), PauliProduct::single(q, Pauli::Y, +1)};
      case ByproductGen::Xm:  // Z -> -Y
        return {PauliProduct::single(q, Pauli::X, +1), PauliProduct::single(q, Pauli::Y, -1)};
    }
    throw std::logic_error("bad generator");
  };
  std::uint32_t bit = 1u << q;
  for (ByproductGen g : w.gens) {
    auto [img_x, img_z] = images(g);
    auto conj_row = [&](PauliProduct& row) {
      bool hx = row.x & bit, hz = row.z & bit;
      if (!hx && !hz) return;
      // strip the local X^hx Z^hz factor, then multiply the images back in
      // X-then-Z order; cross-qubit factors commute so no extra phase
      row.x &= ~bit;
      row.z &= ~bit;
      if (hx) row.mul(img_x);
      if (hz) row.mul(img_z);
    };
    for (auto& row : stab_) conj_row(row);
    for (auto& row : destab_) conj_row(row);
  }
}

std::vector<PauliProduct> Tableau::canonical_stabilizers() const {
  // reduced row echelon form over GF(2) with phase-tracked row products;
  // columns ordered x_0..x_{n-1}, z_0..z_{n-1}
  std::vector<PauliProduct> rows = stab_;
  std::size_t k = 0;
  auto bit_of = [&](const PauliProduct& r, int col) -> bool {
    return col < n_ ? (r.x >> col) & 1u : (r.z >> (col - n_)) & 1u;
  };
  for (int col = 0; col < 2 * n_ && k < rows.size(); ++col) {
    std::size_t j = k;
    while (j < rows.size() && !bit_of(rows[j], col)) ++j;
    if (j == rows.size()) continue;
    std::swap(rows[k], rows[j]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != k && bit_of(rows[i], col)) rows[i].mul(rows[k]);
    }
    ++k;
  }
  return rows;
}

bool Tableau::states_equal(const Tableau& other) const {
  if (n_ != other.n_) throw std::invalid_argument("states_equal needs equal qubit counts");
  return canonical_stabilizers() == other.canonical_stabilizers();
}

std::map<NodeId, int> qubit_indices(const GraphState& g) {
  std::map<NodeId, int> index;
  for (NodeId v : g.nodes()) index.emplace(v, static_cast<int>(index.size()));
  return index;
}

Tableau tableau_from_graph(const GraphState& g) {
  if (g.node_count() < 1 || g.node_count() > 12) {
    throw std::invalid_argument("oracle tableau supports 1..12 qubits");
  }
  auto index = qubit_indices(g);
  std::vector<PauliProduct> stab, destab;
  for (auto [v, q] : index) {
    PauliProduct s = PauliProduct::single(q, Pauli::X);
    for (NodeId u : g.neighbors(v)) s.mul(PauliProduct::single(index.at(u), Pauli::Z));
    stab.push_back(s);
    // Z_v anticommutes with its own stabilizer only
    destab.push_back(PauliProduct::single(q, Pauli::Z));
  }
  return Tableau(static_cast<int>(g.node_count()), std::move(stab), std::move(destab));
}

}  // namespace oneperc::oracle
