#include "retrobell/spin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace retrobell {

UnitVector3::UnitVector3(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("direction must be a finite nonzero vector");
  }
  // Already-unit input is kept bit-for-bit so normalization is idempotent.
  v_ = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? Vec3{x, y, z}
                                                                        : Vec3{x / n, y / n, z / n};
}

UnitVector3 UnitVector3::from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double BornWeights::first_marginal(Sign s) const {
  return s == Sign::plus ? w[0] + w[1] : w[2] + w[3];
}

double BornWeights::second_marginal(Sign s) const {
  return s == Sign::plus ? w[0] + w[2] : w[1] + w[3];
}

void BornWeights::validate(double tol) const {
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("label weights must be finite and non-negative");
    }
  }
  if (std::abs(sum() - 1.0) > tol) {
    throw std::invalid_argument("label weights must sum to 1");
  }
}

Spinor apply_pauli(const Vec3& n, const Spinor& s) {
  // sigma.n = [[nz, nx - i ny], [nx + i ny, -nz]]
  const Complex off_up(n.x, -n.y);
  const Complex off_down(n.x, n.y);
  return {n.z * s[0] + off_up * s[1], off_down * s[0] - n.z * s[1]};
}

SpinEigenstate eigenstate(const UnitVector3& axis, Sign eigenvalue) {
  // Columns of (sigma.n + lambda) are proportional to the eigenvector; pick the
  // column with the larger norm to stay well conditioned near the poles.
  const double lambda = value(eigenvalue);
  const Vec3& n = axis.vec();
  const Spinor col0{Complex(n.z + lambda, 0.0), Complex(n.x, n.y)};
  const Spinor col1{Complex(n.x, -n.y), Complex(-n.z + lambda, 0.0)};
  const double norm0 = std::norm(col0[0]) + std::norm(col0[1]);
  const double norm1 = std::norm(col1[0]) + std::norm(col1[1]);
  Spinor v = norm0 >= norm1 ? col0 : col1;
  const double len = std::sqrt(std::max(norm0, norm1));
  v[0] /= len;
  v[1] /= len;

  // Phase convention: first amplitude with non-negligible modulus is real positive.
  const Complex lead = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
  const Complex phase = std::conj(lead) / std::abs(lead);
  v[0] *= phase;
  v[1] *= phase;
  if (std::abs(v[0]) <= 1e-14) v[0] = 0.0;
  return {axis, eigenvalue, v};
}

TwoQubitState::TwoQubitState(const std::array<Complex, 4>& amplitudes) {
  double total = 0.0;
  for (const auto& a : amplitudes) total += std::norm(a);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("two-qubit state must have finite nonzero norm");
  }
  const double scale =
      std::abs(total - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon() ? 1.0 : 1.0 / std::sqrt(total);
  for (int k = 0; k < 4; ++k) amps_[k] = amplitudes[k] * scale;
}

TwoQubitState singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  return TwoQubitState({0.0, h, -h, 0.0});
}

TwoQubitState triplet_zero() {
  const double h = 1.0 / std::sqrt(2.0);
  return TwoQubitState({0.0, h, h, 0.0});
}

TwoQubitState triplet_up() { return TwoQubitState({1.0, 0.0, 0.0, 0.0}); }

TwoQubitState product(const Spinor& s1, const Spinor& s2) {
  return TwoQubitState({s1[0] * s2[0], s1[0] * s2[1], s1[1] * s2[0], s1[1] * s2[1]});
}

Complex inner(const TwoQubitState& a, const TwoQubitState& b) {
  Complex acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

BornWeights born_weights(const TwoQubitState& state, const UnitVector3& a, const UnitVector3& b) {
  BornWeights out;
  for (const auto& label : kAllLabels) {
    const auto e1 = eigenstate(a, label.first).amplitudes;
    const auto e2 = eigenstate(b, label.second).amplitudes;
    out[label] = std::norm(inner(state, product(e1, e2)));
  }
  // The four weights sum to 1 analytically; dividing out the rounded sum
  // keeps values such as 1/4 and 1/2 exact.
  const double total = out.sum();
  for (double& v : out.w) v /= total;
  return out;
}

double correlator_from_weights(const BornWeights& w) { return w.w[0] - w.w[1] - w.w[2] + w.w[3]; }

double exact_correlator(const TwoQubitState& state, const UnitVector3& a, const UnitVector3& b) {
  return correlator_from_weights(born_weights(state, a, b));
}

}  // namespace retrobell
