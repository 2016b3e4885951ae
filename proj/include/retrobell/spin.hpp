#pragma once

// Spin-1/2 algebra for a pair of qubits measured along arbitrary directions.

#include <array>
#include <complex>
#include <string>

#include "retrobell/vec3.hpp"

namespace retrobell {

using Complex = std::complex<double>;

enum class Sign : int { minus = -1, plus = +1 };

constexpr int value(Sign s) { return static_cast<int>(s); }
constexpr Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline char symbol(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// Joint eigenvalue label (i1, i2) of a pair. Index order is ++, +-, -+, --,
/// which matches the product-basis order used by TwoQubitState.
struct LabelPair {
  Sign first = Sign::plus;
  Sign second = Sign::plus;

  constexpr int index() const {
    return (first == Sign::plus ? 0 : 2) + (second == Sign::plus ? 0 : 1);
  }
  static constexpr LabelPair from_index(int k) {
    return {k < 2 ? Sign::plus : Sign::minus, (k % 2) == 0 ? Sign::plus : Sign::minus};
  }
  std::string name() const { return {symbol(first), symbol(second)}; }

  friend constexpr bool operator==(const LabelPair&, const LabelPair&) = default;
};

inline constexpr std::array<LabelPair, 4> kAllLabels{
    LabelPair{Sign::plus, Sign::plus}, LabelPair{Sign::plus, Sign::minus},
    LabelPair{Sign::minus, Sign::plus}, LabelPair{Sign::minus, Sign::minus}};

/// Direction in 3-space. Always normalized; the zero vector is rejected.
class UnitVector3 {
 public:
  UnitVector3() = default;
  UnitVector3(double x, double y, double z);
  explicit UnitVector3(const Vec3& v) : UnitVector3(v.x, v.y, v.z) {}

  /// Direction at polar angle theta from +z and azimuth phi from +x.
  static UnitVector3 from_angles(double theta, double phi);
  /// Direction in the x-z plane, measured from +z towards +x.
  static UnitVector3 planar(double theta) { return from_angles(theta, 0.0); }

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

  friend bool operator==(const UnitVector3&, const UnitVector3&) = default;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const UnitVector3& a, const UnitVector3& b) { return dot(a.vec(), b.vec()); }

using Spinor = std::array<Complex, 2>;

struct SpinEigenstate {
  UnitVector3 axis;
  Sign eigenvalue = Sign::plus;
  Spinor amplitudes{};
};

/// Amplitudes in the product basis |uu>, |ud>, |du>, |dd> of the z-axis.
class TwoQubitState {
 public:
  /// Normalizes the input; throws std::invalid_argument for a null vector.
  explicit TwoQubitState(const std::array<Complex, 4>& amplitudes);

  const std::array<Complex, 4>& amplitudes() const { return amps_; }
  Complex operator[](int k) const { return amps_[k]; }

  friend bool operator==(const TwoQubitState&, const TwoQubitState&) = default;

 private:
  std::array<Complex, 4> amps_{};
};

/// Probability for each joint label, indexed by LabelPair::index().
struct BornWeights {
  std::array<double, 4> w{};

  double operator[](LabelPair l) const { return w[l.index()]; }
  double& operator[](LabelPair l) { return w[l.index()]; }

  double sum() const { return w[0] + w[1] + w[2] + w[3]; }
  /// P(first label = s).
  double first_marginal(Sign s) const;
  /// P(second label = s).
  double second_marginal(Sign s) const;

  /// Throws std::invalid_argument unless every weight is finite, non-negative,
  /// and the total is 1 within tol.
  void validate(double tol = 1e-10) const;

  friend bool operator==(const BornWeights&, const BornWeights&) = default;
};

/// Eigenvector of sigma.axis. The first nonzero amplitude is real positive.
SpinEigenstate eigenstate(const UnitVector3& axis, Sign eigenvalue);

/// Applies sigma.n to a spinor.
Spinor apply_pauli(const Vec3& n, const Spinor& s);

TwoQubitState singlet();
/// (|ud> + |du>)/sqrt(2), the m = 0 triplet.
TwoQubitState triplet_zero();
/// |uu>.
TwoQubitState triplet_up();

/// Product state |s1> (x) |s2> in the reference basis.
TwoQubitState product(const Spinor& s1, const Spinor& s2);

Complex inner(const TwoQubitState& a, const TwoQubitState& b);

/// w(i1, i2) = |<state| (|i1>_a (x) |i2>_b)|^2.
BornWeights born_weights(const TwoQubitState& state, const UnitVector3& a, const UnitVector3& b);

/// Sum over labels of i1 * i2 * w(i1, i2).
double exact_correlator(const TwoQubitState& state, const UnitVector3& a, const UnitVector3& b);

double correlator_from_weights(const BornWeights& w);

}  // namespace retrobell
