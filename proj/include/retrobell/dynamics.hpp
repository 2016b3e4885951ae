#pragma once

// Pilot-wave guidance of particle positions and transport of position
// densities along the guidance flow.
//
// During the measurement coupling the Hamiltonian is taken to be the
// interaction term alone, which translates each spin branch rigidly along x
// at speed g. Its probability current gives a spatially uniform velocity
// i * g * x_hat for a particle in branch i; this is the velocity that keeps a
// particle co-moving with its packet and keeps |chi|^2 equivariant. Outside
// the coupling window the velocity is grad S of the freely spreading packet.

#include <span>
#include <stdexcept>
#include <vector>

#include "retrobell/packet.hpp"
#include "retrobell/spin.hpp"
#include "retrobell/vec3.hpp"

namespace retrobell {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VelocityField {
  enum class Regime { coupling, free };

  Regime regime = Regime::coupling;
  Sign eigenvalue = Sign::plus;
  double g = 0.0;
  GaussianPacket packet{};      ///< free regime: packet state at reference_time
  double reference_time = 0.0;  ///< free regime only

  static VelocityField coupling(Sign eigenvalue, double g);
  static VelocityField free(const GaussianPacket& packet, double reference_time);

  bool uniform() const { return regime == Regime::coupling; }
};

Vec3 guidance_velocity(const VelocityField& field, const Vec3& r, double t);

struct TrajectorySample {
  double time = 0.0;
  Vec3 position{};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

/// Integrates dr/dt = guidance_velocity from t0 to t1 with classical RK4.
/// The step is shrunk so the last sample lands on t1; uniform fields are
/// advanced in closed form, which RK4 reproduces exactly up to rounding.
/// Throws std::invalid_argument for t1 < t0 or step <= 0, and
/// IntegrationError if the velocity becomes non-finite.
Trajectory integrate_trajectory(const Vec3& start, const VelocityField& field, double t0,
                                double t1, double step);

/// Endpoint of integrate_trajectory without storing the samples.
Vec3 advance(const Vec3& start, const VelocityField& field, double t0, double t1, double step);

struct HistogramGrid {
  int axis = 0;
  double origin = 0.0;
  double bin_width = 1.0;
  int bins = 1;

  double lo(int i) const { return origin + i * bin_width; }
  double hi(int i) const { return origin + (i + 1) * bin_width; }
  double upper() const { return hi(bins - 1); }

  friend bool operator==(const HistogramGrid&, const HistogramGrid&) = default;
};

/// One-dimensional weighted histogram along a coordinate axis. Samples
/// outside the grid land in the underflow/overflow bins so no weight is lost.
class DensityHistogram {
 public:
  explicit DensityHistogram(const HistogramGrid& grid);

  void add(const Vec3& position, double weight = 1.0);
  void add_coordinate(double coordinate, double weight = 1.0);
  void merge(const DensityHistogram& other);

  const HistogramGrid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  double underflow() const { return underflow_; }
  double overflow() const { return overflow_; }
  double total() const { return total_; }

  /// Probability mass per bin with the under/overflow as two extra cells at
  /// the ends: size bins + 2, sums to 1.
  std::vector<double> mass() const;

 private:
  HistogramGrid grid_;
  std::vector<double> weights_;
  double underflow_ = 0.0;
  double overflow_ = 0.0;
  double total_ = 0.0;
};

/// Advects every sample along the field from t0 to t1 (method of
/// characteristics for the continuity equation). Sample count is preserved.
std::vector<Vec3> transport_samples(std::span<const Vec3> initial, const VelocityField& field,
                                    double t0, double t1, double step);

/// Histogram of transported samples, each carrying unit weight.
DensityHistogram transport_density(std::span<const Vec3> initial, const VelocityField& field,
                                   double t0, double t1, double step, const HistogramGrid& grid);

}  // namespace retrobell
