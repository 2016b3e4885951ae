#include "retrobell/dynamics.hpp"

#include <cmath>
#include <numeric>

namespace retrobell {

namespace {

void check_interval(double t0, double t1, double step) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 >= t0)) {
    throw std::invalid_argument("integration interval must satisfy t1 >= t0");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("integration step must be positive");
  }
}

long step_count(double t0, double t1, double step) {
  if (t1 == t0) return 0;
  return std::max(1L, static_cast<long>(std::ceil((t1 - t0) / step - 1e-9)));
}

Vec3 checked_velocity(const VelocityField& field, const Vec3& r, double t) {
  const Vec3 v = guidance_velocity(field, r, t);
  if (!is_finite(v)) throw IntegrationError("non-finite guidance velocity");
  return v;
}

Vec3 rk4_step(const VelocityField& field, const Vec3& r, double t, double h) {
  const Vec3 k1 = checked_velocity(field, r, t);
  const Vec3 k2 = checked_velocity(field, r + k1 * (0.5 * h), t + 0.5 * h);
  const Vec3 k3 = checked_velocity(field, r + k2 * (0.5 * h), t + 0.5 * h);
  const Vec3 k4 = checked_velocity(field, r + k3 * h, t + h);
  return r + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

}  // namespace

VelocityField VelocityField::coupling(Sign eigenvalue, double g) {
  VelocityField f;
  f.regime = Regime::coupling;
  f.eigenvalue = eigenvalue;
  f.g = g;
  return f;
}

VelocityField VelocityField::free(const GaussianPacket& packet, double reference_time) {
  VelocityField f;
  f.regime = Regime::free;
  f.packet = packet;
  f.reference_time = reference_time;
  return f;
}

Vec3 guidance_velocity(const VelocityField& field, const Vec3& r, double t) {
  if (field.regime == VelocityField::Regime::coupling) {
    return kUnitX * (value(field.eigenvalue) * field.g);
  }
  // evolve_free rejects t before the reference time.
  return phase_gradient(evolve_free(field.packet, t - field.reference_time), r);
}

Trajectory integrate_trajectory(const Vec3& start, const VelocityField& field, double t0,
                                double t1, double step) {
  check_interval(t0, t1, step);
  const long n = step_count(t0, t1, step);
  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(n) + 1);
  traj.samples.push_back({t0, start});
  if (n == 0) return traj;

  const double h = (t1 - t0) / static_cast<double>(n);
  if (field.uniform()) {
    const Vec3 v = checked_velocity(field, start, t0);
    for (long k = 1; k <= n; ++k) {
      const double t = k == n ? t1 : t0 + k * h;
      traj.samples.push_back({t, start + v * (t - t0)});
    }
    return traj;
  }
  Vec3 r = start;
  for (long k = 0; k < n; ++k) {
    const double t = t0 + k * h;
    r = rk4_step(field, r, t, h);
    traj.samples.push_back({k + 1 == n ? t1 : t + h, r});
  }
  return traj;
}

Vec3 advance(const Vec3& start, const VelocityField& field, double t0, double t1, double step) {
  check_interval(t0, t1, step);
  if (t1 == t0) return start;
  if (field.uniform()) return start + checked_velocity(field, start, t0) * (t1 - t0);
  const long n = step_count(t0, t1, step);
  const double h = (t1 - t0) / static_cast<double>(n);
  Vec3 r = start;
  for (long k = 0; k < n; ++k) r = rk4_step(field, r, t0 + k * h, h);
  return r;
}

DensityHistogram::DensityHistogram(const HistogramGrid& grid) : grid_(grid) {
  if (grid.bins < 1 || !(grid.bin_width > 0.0) || grid.axis < 0 || grid.axis > 2 ||
      !std::isfinite(grid.origin)) {
    throw std::invalid_argument("histogram grid needs >= 1 bin, positive bin width, axis 0-2");
  }
  weights_.assign(static_cast<std::size_t>(grid.bins), 0.0);
}

void DensityHistogram::add(const Vec3& position, double weight) {
  add_coordinate(position[grid_.axis], weight);
}

void DensityHistogram::add_coordinate(double coordinate, double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("histogram weights must be non-negative");
  total_ += weight;
  const double u = (coordinate - grid_.origin) / grid_.bin_width;
  if (u < 0.0) {
    underflow_ += weight;
  } else if (u >= grid_.bins) {
    overflow_ += weight;
  } else {
    weights_[static_cast<std::size_t>(u)] += weight;
  }
}

void DensityHistogram::merge(const DensityHistogram& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("cannot merge histograms on different grids");
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
  total_ += other.total_;
}

std::vector<double> DensityHistogram::mass() const {
  std::vector<double> m;
  m.reserve(weights_.size() + 2);
  m.push_back(underflow_);
  m.insert(m.end(), weights_.begin(), weights_.end());
  m.push_back(overflow_);
  if (total_ > 0.0) {
    for (double& x : m) x /= total_;
  }
  return m;
}

std::vector<Vec3> transport_samples(std::span<const Vec3> initial, const VelocityField& field,
                                    double t0, double t1, double step) {
  std::vector<Vec3> out;
  out.reserve(initial.size());
  for (const Vec3& r : initial) out.push_back(advance(r, field, t0, t1, step));
  return out;
}

DensityHistogram transport_density(std::span<const Vec3> initial, const VelocityField& field,
                                   double t0, double t1, double step, const HistogramGrid& grid) {
  DensityHistogram h(grid);
  for (const Vec3& r : initial) h.add(advance(r, field, t0, t1, step));
  return h;
}

}  // namespace retrobell
