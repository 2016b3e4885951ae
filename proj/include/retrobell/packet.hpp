#pragma once

// Analytic Gaussian wavepackets in 3-space (hbar = m = 1).
//
// A packet is stored as its waist parameters plus the free time elapsed since
// the waist, so free spreading stays closed-form:
//   width(t)  = waist * sqrt(1 + (t / (2 waist^2))^2)       per axis
//   grad S(r) = momentum + (r - center) * t / (4 waist^4 + t^2)
// The measurement coupling only translates a packet rigidly along x.

#include <array>
#include <vector>

#include "retrobell/random.hpp"
#include "retrobell/spin.hpp"
#include "retrobell/vec3.hpp"

namespace retrobell {

struct GaussianPacket {
  Vec3 center{};
  Vec3 waist{1.0, 1.0, 1.0};  ///< position standard deviation of |chi|^2 at the waist
  Vec3 momentum{};            ///< phase gradient at the center
  double spread_time = 0.0;   ///< free evolution time since the waist

  /// Isotropic packet at rest.
  static GaussianPacket at_rest(const Vec3& center, double width);

  /// Current per-axis standard deviation of |chi|^2.
  Vec3 width() const;

  /// Throws std::invalid_argument if any waist is non-positive or a field is non-finite.
  void validate() const;

  friend bool operator==(const GaussianPacket&, const GaussianPacket&) = default;
};

struct PacketPairSnapshot {
  GaussianPacket first;
  GaussianPacket second;
  double time = 0.0;

  friend bool operator==(const PacketPairSnapshot&, const PacketPairSnapshot&) = default;
};

/// |chi(r)|^2.
double density(const GaussianPacket& p, const Vec3& r);

/// Phase gradient grad S at r, which is also the free-regime guidance velocity.
Vec3 phase_gradient(const GaussianPacket& p, const Vec3& r);

/// Cumulative distribution of the x-marginal of |chi|^2.
double marginal_cdf(const GaussianPacket& p, int axis, double coordinate);

/// Draws a position from |chi|^2.
Vec3 sample_position(const GaussianPacket& p, Rng& rng);

/// Rigid shift by eigenvalue * g * dt along x. Throws for dt < 0.
GaussianPacket translate_under_coupling(const GaussianPacket& p, Sign eigenvalue, double g,
                                        double dt);

/// Force-free evolution for dt (dt >= 0): the center drifts with the momentum
/// and the width spreads.
GaussianPacket evolve_free(const GaussianPacket& p, double dt);

struct EpistemicBranch {
  LabelPair label;
  double weight = 0.0;
  Vec3 center1{};
  Vec3 center2{};
};

/// The four configuration-space branches of the prepared state after the
/// coupling has acted for dt: weight |c_{i1 i2}|^2 and centers shifted by
/// i1 g dt and i2 g dt along x.
std::array<EpistemicBranch, 4> epistemic_branch_centers(const TwoQubitState& state,
                                                        const UnitVector3& a,
                                                        const UnitVector3& b, double g,
                                                        double dt, const Vec3& center1 = {},
                                                        const Vec3& center2 = {});

/// Integral of min(|chi_p|^2, |chi_q|^2) over space, in [0, 1].
/// Closed form for equal widths, grid quadrature otherwise.
double branch_overlap(const GaussianPacket& p, const GaussianPacket& q);

}  // namespace retrobell
