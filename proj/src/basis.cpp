#include "oneperc/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oneperc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  // snap values that round to 2*pi back to 0
  if (kTwoPi - a < 1e-12) a = 0.0;
  return a;
}

// Conjugation of a signed Pauli axis by a generator, in the basis-propagation
// direction g^dag P g (pushing a measurement through the word). The sign table
// is fixed by explicit 2x2 unitary computation; test_basis.cpp re-derives it
// from complex matrices.
std::pair<Pauli, int> conj_basis(ByproductGen g, Pauli p) {
  switch (g) {
    case ByproductGen::Zp:
      if (p == Pauli::X) return {Pauli::Y, +1};
      if (p == Pauli::Y) return {Pauli::X, -1};
      return {Pauli::Z, +1};
    case ByproductGen::Zm:
      if (p == Pauli::X) return {Pauli::Y, -1};
      if (p == Pauli::Y) return {Pauli::X, +1};
      return {Pauli::Z, +1};
    case ByproductGen::Xp:
      if (p == Pauli::Z) return {Pauli::Y, -1};
      if (p == Pauli::Y) return {Pauli::Z, +1};
      return {Pauli::X, +1};
    case ByproductGen::Xm:
      if (p == Pauli::Z) return {Pauli::Y, +1};
      if (p == Pauli::Y) return {Pauli::Z, -1};
      return {Pauli::X, +1};
  }
  throw std::logic_error("bad generator");
}

// Pushes an axis through a whole word (last-applied generator first, since it
// is the factor adjacent to the measurement in M_b * g_{k-1} ... g_0).
Pauli push_axis(const ByproductWord& w, Pauli p, int& sign) {
  for (auto it = w.gens.rbegin(); it != w.gens.rend(); ++it) {
    auto [q, sgn] = conj_basis(*it, p);
    p = q;
    sign *= sgn;
  }
  return p;
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::logic_error("bad pauli");
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli: ") + c);
}

std::string byproduct_gen_name(ByproductGen g) {
  switch (g) {
    case ByproductGen::Zp: return "UZ+";
    case ByproductGen::Zm: return "UZ-";
    case ByproductGen::Xp: return "UX+";
    case ByproductGen::Xm: return "UX-";
  }
  throw std::logic_error("bad generator");
}

void ByproductWord::append(const ByproductWord& w) {
  gens.insert(gens.end(), w.gens.begin(), w.gens.end());
}

MeasurementBasis::MeasurementBasis(Pauli p1, Pauli p2, double angle, int sign) {
  if (p1 == p2) throw std::invalid_argument("measurement plane needs two distinct Paulis");
  if (sign != +1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  double a = wrap_angle(sign < 0 ? angle + std::numbers::pi : angle);
  // canonical plane order X < Y < Z; swapping axes maps angle a to atan2(cos,sin)
  if (static_cast<int>(p1) > static_cast<int>(p2)) {
    double c1 = std::cos(a), c2 = std::sin(a);
    std::swap(p1, p2);
    a = wrap_angle(std::atan2(c1, c2));
  }
  plane_ = {p1, p2};
  angle_ = a;
  // fold pure-axis observables to the documented canonical planes
  if (auto sp = as_signed_pauli()) {
    switch (sp->first) {
      case Pauli::X:
        plane_ = {Pauli::X, Pauli::Y};
        angle_ = sp->second > 0 ? 0.0 : std::numbers::pi;
        break;
      case Pauli::Y:
        plane_ = {Pauli::X, Pauli::Y};
        angle_ = wrap_angle(sp->second > 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2);
        break;
      case Pauli::Z:
        plane_ = {Pauli::Z, Pauli::X};
        angle_ = sp->second > 0 ? 0.0 : std::numbers::pi;
        break;
    }
  }
}

double MeasurementBasis::coefficient(Pauli axis) const {
  if (axis == plane_[0]) return std::cos(angle_);
  if (axis == plane_[1]) return std::sin(angle_);
  return 0.0;
}

std::optional<std::pair<Pauli, int>> MeasurementBasis::as_signed_pauli(double tol) const {
  double c = std::cos(angle_), s = std::sin(angle_);
  if (std::abs(s) < tol) return std::make_pair(plane_[0], c > 0 ? +1 : -1);
  if (std::abs(c) < tol) return std::make_pair(plane_[1], s > 0 ? +1 : -1);
  return std::nullopt;
}

bool MeasurementBasis::approx_equal(const MeasurementBasis& other, double tol) const {
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    if (std::abs(coefficient(p) - other.coefficient(p)) > tol) return false;
  }
  return true;
}

std::string MeasurementBasis::to_string() const {
  std::ostringstream os;
  os << "basis(" << pauli_char(plane_[0]) << pauli_char(plane_[1]) << ", " << angle_ << ")";
  return os.str();
}

std::string PauliPair::to_string() const {
  std::ostringstream os;
  os << (sign > 0 ? '+' : '-') << pauli_char(on_first) << "1" << pauli_char(on_second) << "2";
  return os.str();
}

bool FusionBasis::same_observables(const FusionBasis& other) const {
  return (a == other.a && b == other.b) || (a == other.b && b == other.a);
}

std::string FusionBasis::to_string() const {
  return "(" + a.to_string() + ", " + b.to_string() + ")";
}

std::pair<MeasurementBasis, ByproductWord> propagate_through_measurement(
    const ByproductWord& w, const MeasurementBasis& b) {
  Pauli p1 = b.plane_first(), p2 = b.plane_second();
  int s1 = 1, s2 = 1;
  p1 = push_axis(w, p1, s1);
  p2 = push_axis(w, p2, s2);
  if (p1 == p2) throw std::logic_error("conjugation collapsed the measurement plane");
  double angle = std::atan2(s2 * b.coefficient(b.plane_second()),
                            s1 * b.coefficient(b.plane_first()));
  return {MeasurementBasis(p1, p2, angle), w};
}

FusionBasis propagate_through_fusion(const ByproductWord& w1, const ByproductWord& w2,
                                     const FusionBasis& f) {
  auto adjust = [&](PauliPair pp) {
    pp.on_first = push_axis(w1, pp.on_first, pp.sign);
    pp.on_second = push_axis(w2, pp.on_second, pp.sign);
    return pp;
  };
  FusionBasis out{adjust(f.a), adjust(f.b)};
  // the adjusted products must still commute and stay independent
  int anti = (out.a.on_first != out.b.on_first ? 1 : 0) +
             (out.a.on_second != out.b.on_second ? 1 : 0);
  if (anti % 2 != 0) throw std::logic_error("adjusted fusion basis does not commute");
  return out;
}

}  // namespace oneperc
