#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneperc {

enum class Pauli : std::uint8_t { X = 0, Y = 1, Z = 2 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// Pending local Clifford generators, exp(s * i*pi/4 * P) with P in {X, Z}.
enum class ByproductGen : std::uint8_t { Zp = 0, Zm = 1, Xp = 2, Xm = 3 };

std::string byproduct_gen_name(ByproductGen g);

// Generators listed in the order they act on the state: word {g0, g1} means
// g0 is applied first, so the word's unitary is g1 * g0.
struct ByproductWord {
  std::vector<ByproductGen> gens;

  bool empty() const { return gens.empty(); }
  void append(ByproductGen g) { gens.push_back(g); }
  void append(const ByproductWord& w);

  bool operator==(const ByproductWord&) const = default;
};

// Measurement of sign * (cos(angle) * plane[0] + sin(angle) * plane[1]).
//
// Stored canonically: sign folded into the angle, plane ordered X < Y < Z,
// so equal physical observables compare equal. Z-basis canonicalizes to
// plane (Z, X) at angle 0, matching the usual graph-state conventions.
class MeasurementBasis {
 public:
  MeasurementBasis(Pauli p1, Pauli p2, double angle, int sign = +1);

  static MeasurementBasis z() { return MeasurementBasis(Pauli::Z, Pauli::X, 0.0); }
  static MeasurementBasis x() { return MeasurementBasis(Pauli::X, Pauli::Y, 0.0); }
  static MeasurementBasis y() { return MeasurementBasis(Pauli::X, Pauli::Y, 1.5707963267948966); }
  // Equatorial measurement E(alpha) in the X-Y plane.
  static MeasurementBasis equatorial(double alpha) {
    return MeasurementBasis(Pauli::X, Pauli::Y, alpha);
  }

  Pauli plane_first() const { return plane_[0]; }
  Pauli plane_second() const { return plane_[1]; }
  double angle() const { return angle_; }

  // Coefficient of the given Pauli axis in the measured observable.
  double coefficient(Pauli axis) const;

  // True when the observable is (up to sign conventions already folded in)
  // a single signed Pauli; used by the tableau oracle.
  std::optional<std::pair<Pauli, int>> as_signed_pauli(double tol = 1e-9) const;

  bool approx_equal(const MeasurementBasis& other, double tol = 1e-9) const;
  bool operator==(const MeasurementBasis& other) const { return approx_equal(other); }

  std::string to_string() const;

 private:
  std::array<Pauli, 2> plane_;
  double angle_;  // in [0, 2*pi), sign already folded in
};

// Signed two-qubit Pauli product, e.g. +X1Z2.
struct PauliPair {
  Pauli on_first;
  Pauli on_second;
  int sign;  // +1 or -1

  bool operator==(const PauliPair&) const = default;
  std::string to_string() const;
};

// The two commuting products measured by a type-II fusion.
struct FusionBasis {
  PauliPair a;
  PauliPair b;

  static FusionBasis standard() {
    return {{Pauli::X, Pauli::Z, +1}, {Pauli::Z, Pauli::X, +1}};
  }

  // Unordered comparison: the pair {a, b} is a set of observables.
  bool same_observables(const FusionBasis& other) const;
  std::string to_string() const;
};

// Pushes the measurement of `b` through the byproduct word `w`, returning the
// adjusted basis b' with M_b U = U M_b'. The word itself is returned unchanged;
// it stays pending until the end of the computation.
std::pair<MeasurementBasis, ByproductWord> propagate_through_measurement(
    const ByproductWord& w, const MeasurementBasis& b);

// Pushes an XZ,ZX fusion through byproduct words on its two qubits.
FusionBasis propagate_through_fusion(const ByproductWord& w1, const ByproductWord& w2,
                                     const FusionBasis& f);

}  // namespace oneperc
