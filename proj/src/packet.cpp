#include "retrobell/packet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace retrobell {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double axis_width(double waist, double t) {
  const double r = t / (2.0 * waist * waist);
  return waist * std::sqrt(1.0 + r * r);
}

bool same_widths(const Vec3& a, const Vec3& b) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(a[k] - b[k]) > 1e-12 * std::max(a[k], b[k])) return false;
  }
  return true;
}

// Midpoint-rule integral of min(p, q) over a box covering both packets.
double overlap_by_quadrature(const GaussianPacket& p, const GaussianPacket& q) {
  constexpr int kCells = 96;
  const Vec3 wp = p.width();
  const Vec3 wq = q.width();
  Vec3 lo, step;
  for (int k = 0; k < 3; ++k) {
    const double a = std::min(p.center[k] - 8.0 * wp[k], q.center[k] - 8.0 * wq[k]);
    const double b = std::max(p.center[k] + 8.0 * wp[k], q.center[k] + 8.0 * wq[k]);
    lo[k] = a;
    step[k] = (b - a) / kCells;
  }
  double acc = 0.0;
  for (int i = 0; i < kCells; ++i) {
    for (int j = 0; j < kCells; ++j) {
      for (int l = 0; l < kCells; ++l) {
        const Vec3 r{lo.x + (i + 0.5) * step.x, lo.y + (j + 0.5) * step.y,
                     lo.z + (l + 0.5) * step.z};
        acc += std::min(density(p, r), density(q, r));
      }
    }
  }
  return std::clamp(acc * step.x * step.y * step.z, 0.0, 1.0);
}

}  // namespace

GaussianPacket GaussianPacket::at_rest(const Vec3& center, double width) {
  GaussianPacket p;
  p.center = center;
  p.waist = {width, width, width};
  p.validate();
  return p;
}

Vec3 GaussianPacket::width() const {
  return {axis_width(waist.x, spread_time), axis_width(waist.y, spread_time),
          axis_width(waist.z, spread_time)};
}

void GaussianPacket::validate() const {
  if (!is_finite(center) || !is_finite(momentum) || !std::isfinite(spread_time)) {
    throw std::invalid_argument("packet parameters must be finite");
  }
  if (!(waist.x > 0.0 && waist.y > 0.0 && waist.z > 0.0) || !is_finite(waist)) {
    throw std::invalid_argument("packet width must be positive on every axis");
  }
}

double density(const GaussianPacket& p, const Vec3& r) {
  const Vec3 w = p.width();
  double exponent = 0.0;
  double norm = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double d = (r[k] - p.center[k]) / w[k];
    exponent += d * d;
    norm *= w[k];
  }
  constexpr double kInvTwoPiCubedRoot = 0.063493635934240969;  // (2 pi)^(-3/2)
  return kInvTwoPiCubedRoot / norm * std::exp(-0.5 * exponent);
}

Vec3 phase_gradient(const GaussianPacket& p, const Vec3& r) {
  Vec3 v = p.momentum;
  const double t = p.spread_time;
  for (int k = 0; k < 3; ++k) {
    const double w2 = p.waist[k] * p.waist[k];
    v[k] += (r[k] - p.center[k]) * t / (4.0 * w2 * w2 + t * t);
  }
  return v;
}

double marginal_cdf(const GaussianPacket& p, int axis, double coordinate) {
  return normal_cdf((coordinate - p.center[axis]) / p.width()[axis]);
}

Vec3 sample_position(const GaussianPacket& p, Rng& rng) {
  std::normal_distribution<double> normal;
  const Vec3 w = p.width();
  const double x = normal(rng);
  const double y = normal(rng);
  const double z = normal(rng);
  return {p.center.x + w.x * x, p.center.y + w.y * y, p.center.z + w.z * z};
}

GaussianPacket translate_under_coupling(const GaussianPacket& p, Sign eigenvalue, double g,
                                        double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("coupling duration must be non-negative");
  GaussianPacket out = p;
  out.center.x += value(eigenvalue) * g * dt;
  return out;
}

GaussianPacket evolve_free(const GaussianPacket& p, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("free evolution time must be non-negative");
  GaussianPacket out = p;
  out.center += p.momentum * dt;
  out.spread_time += dt;
  return out;
}

std::array<EpistemicBranch, 4> epistemic_branch_centers(const TwoQubitState& state,
                                                        const UnitVector3& a,
                                                        const UnitVector3& b, double g,
                                                        double dt, const Vec3& center1,
                                                        const Vec3& center2) {
  if (!(dt >= 0.0)) throw std::invalid_argument("coupling duration must be non-negative");
  const BornWeights w = born_weights(state, a, b);
  std::array<EpistemicBranch, 4> out{};
  for (const auto& label : kAllLabels) {
    auto& br = out[label.index()];
    br.label = label;
    br.weight = w[label];
    br.center1 = center1 + kUnitX * (value(label.first) * g * dt);
    br.center2 = center2 + kUnitX * (value(label.second) * g * dt);
  }
  return out;
}

double branch_overlap(const GaussianPacket& p, const GaussianPacket& q) {
  const Vec3 wp = p.width();
  const Vec3 wq = q.width();
  if (!same_widths(wp, wq)) return overlap_by_quadrature(p, q);
  // Equal covariances: the densities cross on the bisecting plane, so the
  // overlap is twice the tail mass beyond half the Mahalanobis separation.
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = (p.center[k] - q.center[k]) / wp[k];
    d2 += d * d;
  }
  return 2.0 * normal_cdf(-0.5 * std::sqrt(d2));
}

}  // namespace retrobell
